# Exact block computations for q(3) and sq(3)
__version__ = "1.0.0"
