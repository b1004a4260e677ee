# config.py
import os

# The smallest-prime-factor table stores one uint32 per modulus. Anything above this
# limit needs a segmented sieve, which this project does not build.
FACTOR_TABLE_MAX_LIMIT = 2**31

# Upper bound for p^k when lifting roots. Keeps every modulus inside a signed 64-bit word
# so numpy arrays of roots can stay int64.
PRIME_POWER_MAX = 2**63

# Primes up to this bound get their roots by evaluating f on every residue (vectorized).
# Larger primes use gcd(x^p - x, f) and Cantor-Zassenhaus splitting, which is much
# cheaper once p is in the thousands.
BRUTE_FORCE_ROOT_LIMIT = 2048

# How many small primes (not dividing lc(f)*disc(f)) are tried when looking for an
# irreducible reduction mod p.
IRREDUCIBILITY_PRIME_BUDGET = 20

# The rational root test enumerates divisors of the constant and leading coefficients.
# Above this size the test is skipped and the verdict falls back to the mod-p evidence.
RATIONAL_ROOT_COEFF_LIMIT = 10**12

# Number of consecutive moduli handled by one worker task. Partial sums are always
# reduced in block order, so this also fixes the floating-point summation order.
BLOCK_SIZE = 4096

DEFAULT_THREADS = 1
DEFAULT_GRID_RESOLUTION = 256
DEFAULT_MODULI = "all"

# (h1, h2) frequencies checked when --freq is not given.
DEFAULT_FREQUENCIES = [(1, 0), (0, 1), (1, 1), (2, -3)]

# Rectangles are kept as strings so their corners stay exact rationals.
DEFAULT_RECTANGLES = ["0:0.5:0:0.5"]

# Width of the diagonal band for the prime-moduli counterexample.
DEFAULT_EPS = "0"

# Significant digits for every number written to CSV or JSON.
SIGNIFICANT_DIGITS = 12

PARSEVAL_TOLERANCE = 1e-6
TWISTED_TOLERANCE = 1e-9
CONJUGATE_TOLERANCE = 1e-12

# Seed for the random coprime pairs drawn by the self-test suites.
SELFTEST_SEED = 20240601

CACHE_ENV_VAR = "EQUIDIST_CACHE"
DEFAULT_CACHE_PATH = os.environ.get(CACHE_ENV_VAR)

# Status lines ([*], [+], [-], [!]) go to stderr unless --quiet clears this.
VERBOSE = True
