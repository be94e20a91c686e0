"""Growth tightness of groups acting on hyperbolic spaces, checked on exact models."""

from .embedding import EmbeddingConfig, TightnessReport, build_phi, tightness_report
from .free_product import FreeProductWord, free_product_growth_rate, gap_bound, lambda_norm
from .growth import BallTable, GrowthEstimate, ball_count, growth_rate
from .metric import FiniteMetricSpace, four_point_delta, gromov_product
from .models import CyclicFreeProduct, FreeAbelianGroup, FreeGroup, quotient_model
from .nets import RhoNet, build_rho_net, check_net, verify_rho_comparison
from .orbit import ConstantsBundle, OrbitContext, make_constants
from .words import Word, format_word, free_reduce, parse_word

__all__ = [
    "BallTable", "ConstantsBundle", "CyclicFreeProduct", "EmbeddingConfig", "FiniteMetricSpace",
    "FreeAbelianGroup", "FreeGroup", "FreeProductWord", "GrowthEstimate", "OrbitContext",
    "RhoNet", "TightnessReport", "Word", "ball_count", "build_phi", "build_rho_net",
    "check_net", "format_word", "four_point_delta", "free_product_growth_rate", "free_reduce",
    "gap_bound", "gromov_product", "growth_rate", "lambda_norm", "make_constants",
    "parse_word", "quotient_model", "tightness_report", "verify_rho_comparison",
]
__version__ = "0.1.0"
