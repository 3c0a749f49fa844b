import json
import logging
from typing import Any, Dict, List, Optional

import pandas as pd

from qblocks import __version__
from qblocks.models import (
    Algebra,
    BlockDescriptor,
    CheckResult,
    ProjectiveTable,
    QModel,
    RelationSet,
    ReportEnvelope,
    Weight,
)
from qblocks.services.blocks import BlockFamily
from qblocks.services.characters import FormalCharacter, character_stats
from qblocks.services.grothendieck import block_simples, grothendieck_of_projective_from_layers
from qblocks.services.path_algebra import PathAlgebra, endomorphism_algebra_summary, radical_filtration
from qblocks.services.quivers import Quiver
from qblocks.services.weights import (
    block_class,
    clifford_data,
    is_highest_weight_block,
    is_semisimple_block,
    restrict_induce_class,
    self_ext,
)

logger = logging.getLogger(__name__)


def dump(model: QModel) -> Dict[str, Any]:
    return model.model_dump(by_alias=True, mode="json")


def envelope(
    command: str, inputs: Dict[str, Any], results: Any, warnings: Optional[List[str]] = None
) -> ReportEnvelope:
    return ReportEnvelope(
        command=command, version=__version__, inputs=inputs, results=results, warnings=warnings or []
    )


def render_json(report: ReportEnvelope) -> str:
    """Serialise an envelope with camelCase keys; key order follows insertion so output is stable."""
    return json.dumps(dump(report), indent=2, ensure_ascii=False)


def block_summary(block: BlockDescriptor) -> Dict[str, Any]:
    return {
        "algebra": block.algebra.value,
        "blockClass": block.block_class.value,
        "baseWeight": str(block.base_weight),
        "centralWeight": str(block.central_weight),
        "highestWeight": is_highest_weight_block(block),
        "semisimple": is_semisimple_block(block),
    }


def classify_report(weight: Weight, algebra: Algebra) -> Dict[str, Any]:
    """Block class of a weight together with its Clifford and self-extension data."""
    block = block_class(weight, algebra)
    result = block_summary(block)
    result["weight"] = str(weight)
    result["clifford"] = dump(clifford_data(weight, algebra))
    result["selfExt"] = dump(self_ext(weight, algebra))
    if algebra == Algebra.Q:
        result["restriction"] = dump(restrict_induce_class(weight))
    return result


def quiver_summary(quiver: Quiver, relations: RelationSet) -> Dict[str, Any]:
    return {
        "cutoff": quiver.cutoff,
        "vertices": quiver.vertices,
        "trusted": [v for v in quiver.vertices if quiver.is_trusted(v)],
        "arrows": [{"name": a.name, "source": a.source, "target": a.target} for a in quiver.arrows],
        "relations": relations.raw,
        "orientation": relations.orientation.value,
        "parityEquivariant": quiver.is_parity_equivariant(),
    }


def block_report(block: BlockDescriptor, quiver: Quiver, relations: RelationSet, bound: int) -> Dict[str, Any]:
    family = BlockFamily(block)
    simples = [
        {
            "name": label.name,
            "weight": str(label.weight),
            "index": label.index,
            "type": label.type.value,
        }
        for label in block_simples(block, bound)
    ]
    return {
        "block": block_summary(block),
        "family": family.describe(),
        "simples": simples,
        "quiver": quiver_summary(quiver, relations),
    }


def character_report(character: FormalCharacter) -> Dict[str, Any]:
    """Terms as 'λ1,...,λn' keys with [even, odd] coefficients, sorted by weight."""
    terms = {
        str(Weight(doubled=w)).strip("()"): list(c)
        for w, c in sorted(character.terms.items(), reverse=True)
    }
    result: Dict[str, Any] = {"exact": character.is_exact, "floor": character.floor, "terms": terms}
    if character.is_exact:
        result["stats"] = dump(character_stats(character))
    else:
        result["window"] = character.window
    return result


def character_warnings(character: FormalCharacter) -> List[str]:
    if character.is_exact:
        return []
    return [f"window: coefficients below doubled height {character.floor} are not certified"]


def projective_report(table: ProjectiveTable) -> Dict[str, Any]:
    return {
        "block": block_summary(table.block),
        "bound": table.bound,
        "aCoefficients": table.a_coefficients,
        "projectives": {name: vector.entries for name, vector in table.projectives.items()},
    }


def projective_frame(table: ProjectiveTable) -> pd.DataFrame:
    """Composition multiplicities with one row per projective and one column per simple."""
    rows = {name: vector.entries for name, vector in table.projectives.items()}
    columns = []
    for entries in rows.values():
        columns.extend(k for k in entries if k not in columns)
    frame = pd.DataFrame.from_dict(rows, orient="index", columns=columns)
    return frame.fillna(0).astype(int)


def render_table(frame: pd.DataFrame) -> str:
    return frame.to_string()


def filtration_report(algebra: PathAlgebra, vertex: str) -> Dict[str, Any]:
    filtration = radical_filtration(algebra, vertex)
    tracked = grothendieck_of_projective_from_layers(filtration)
    return {
        "vertex": vertex,
        "layers": filtration.layers,
        "sizes": filtration.sizes,
        "palindromic": filtration.is_palindromic(),
        "trusted": filtration.trusted,
        "class": tracked.entries,
        "collapsedClass": tracked.collapse().entries,
        "endomorphisms": dump(endomorphism_algebra_summary(algebra, vertex)),
    }


def verification_report(results: List[CheckResult]) -> Dict[str, Any]:
    return {
        "passed": all(r.passed for r in results),
        "checks": [dump(r) for r in results],
    }
