"""Structure of the first layer of a Z_p-extension with cyclic base class group.

Modules:

- ``padic``: Z/p^N arithmetic and Smith normal form over Z_p
- ``group_ring``: Z_p[sigma] and Z_p[zeta]
- ``reiner``: quotients of Z_p[sigma] by finite-index ideals
- ``classification``: closed-form shapes and the list of possible A_1
- ``heuristics``: lambda and A_1 distributions
- ``quadratic``: imaginary quadratic class groups
- ``finite_field`` / ``function_field``: hyperelliptic class numbers over F_3
- ``records`` / ``cli``: external data and the command line
"""
from .classification import format_shape, parse_shape, closed_form_shape, possible_a1_shapes
from .heuristics import ejv_lambda_prob, new_lambda_prob, predicted_a1_distribution
from .padic import PrecisionError
from .reiner import ReinerIdeal, quotient_brute_force, quotient_shape_snf

__version__ = "0.1.0"

__all__ = [
    "PrecisionError",
    "ReinerIdeal",
    "ejv_lambda_prob",
    "format_shape",
    "new_lambda_prob",
    "parse_shape",
    "predicted_a1_distribution",
    "quotient_brute_force",
    "quotient_shape_snf",
    "closed_form_shape",
    "possible_a1_shapes",
]
