"""Prime gap interval census, special prime sequences, chain sieve, and a
random-model testbed, over exact rational interval multipliers."""

from .engine import Multiplier, PrimeTable, TWO, build_table
from .errors import (
    ChainStallError,
    CoverageError,
    IncompleteResultError,
    MemoryCapError,
    PrimeGapsError,
    VerificationFailure,
)
from .classify import (
    GapClass,
    IntervalCensus,
    census,
    check_interleaving,
    classify_prime,
    l_primes,
    pseudo_primes,
    r_primes,
    r_star_primes,
)
from .special import (
    SpecialPrimeSeq,
    labos_primes,
    labos_primes_up_to,
    ramanujan_primes,
    ramanujan_primes_up_to,
    required_limit,
    verify_sondow_laishram,
)
from .bertrand import (
    BertrandChain,
    bertrand_chain,
    construct_chains,
    sieve_construct,
    verify_theorem1,
)
from .cramer import (
    CramerSample,
    census_on_sample,
    interval_free_probability,
    proposition1_deviation,
    run_report,
    simulate,
)
from .stats import (
    DensityReport,
    ProbSet,
    density_report,
    solve_lambda,
    theoretical_probabilities,
)

__version__ = "0.1.0"
