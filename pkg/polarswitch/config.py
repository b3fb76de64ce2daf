import logging
import os

from dotenv import load_dotenv

load_dotenv()

THREADS = max(1, int(os.getenv("POLARSWITCH_THREADS", "1")))

PRIME_COUNT = int(os.getenv("POLARSWITCH_PRIME_COUNT", "5"))
SEED = int(os.getenv("POLARSWITCH_SEED", "0"))

CHARPOLY_MAX_VERTICES = int(os.getenv("POLARSWITCH_CHARPOLY_MAX_VERTICES", "2000"))
EXHAUSTIVE_MAX_VERTICES = int(os.getenv("POLARSWITCH_EXHAUSTIVE_MAX_VERTICES", "64"))
LARGE_VERTICES = int(os.getenv("POLARSWITCH_LARGE_VERTICES", "5000"))

CLIQUE_FLOOR = int(os.getenv("POLARSWITCH_CLIQUE_FLOOR", "1"))

STORE_MAX_GRAPHS = int(os.getenv("POLARSWITCH_STORE_MAX_GRAPHS", "64"))
STORE_MAX_REPORTS = int(os.getenv("POLARSWITCH_STORE_MAX_REPORTS", "256"))
CORS_ORIGINS = [o.strip() for o in os.getenv("POLARSWITCH_CORS_ORIGINS", "*").split(",") if o.strip()]

LOG_LEVEL = os.getenv("POLARSWITCH_LOG_LEVEL", "INFO").strip().upper() or "INFO"

REPORT_SCHEMA_VERSION = 1
RECORD_SCHEMA_VERSION = 1
DESIGN_FORMAT_VERSION = 1

# Charpoly primes live in [2^23, 2^24): products fit in 48 bits, row sums of up to
# 2^15 products stay inside int64.
PRIME_WINDOW = (1 << 23, 1 << 24)

MAX_FIELD_ORDER = 256


def configure_logging(level: str = LOG_LEVEL) -> None:
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s %(message)s")
