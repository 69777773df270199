from .families import (
    HyperellipticModel,
    PrimeDiscSearch,
    brumer_core,
    brumer_curve,
    brumer_disc,
    mestre_curve,
    mestre_disc,
    nonsplit_certificate,
    prime_disc_search,
)
from .igusa import IgusaClebsch, igusa_clebsch, isomorphism_obstruction, transform_sextic

__all__ = [
    "HyperellipticModel",
    "IgusaClebsch",
    "PrimeDiscSearch",
    "brumer_core",
    "brumer_curve",
    "brumer_disc",
    "igusa_clebsch",
    "isomorphism_obstruction",
    "mestre_curve",
    "mestre_disc",
    "nonsplit_certificate",
    "prime_disc_search",
    "transform_sextic",
]
