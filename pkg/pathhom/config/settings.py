from dotenv import load_dotenv
import os

load_dotenv()


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() in {"1", "true", "yes"}


class Settings:
    # Default homology dimension for every CLI pipeline (first three Betti numbers)
    MAX_DIM: int = int(os.getenv("PATHHOM_MAX_DIM", "2"))

    # Worker processes; 0 means one per available core
    THREADS: int = int(os.getenv("PATHHOM_THREADS", "0"))

    # Single seed for all randomness surfaced through --seed
    SEED: int = int(os.getenv("PATHHOM_SEED", "1"))

    OUTPUT_FORMAT = os.getenv("PATHHOM_OUTPUT_FORMAT", "json")

    # Where downloaded datasets and fixtures live
    DATA_DIR = os.getenv("PATHHOM_DATA_DIR", "data")

    LOG_DIR = os.getenv("PATHHOM_LOG_DIR", "logs")
    LOG_LEVEL = os.getenv("PATHHOM_LOG_LEVEL", "INFO")
    LOG_TO_FILE: bool = _env_bool("PATHHOM_LOG_TO_FILE", "true")

    # Dataset downloads
    HTTP_TIMEOUT: int = int(os.getenv("PATHHOM_HTTP_TIMEOUT", "30"))
    HTTP_RETRIES: int = int(os.getenv("PATHHOM_HTTP_RETRIES", "3"))

    # Trials / classes / windows handed to one worker job. Fixed so that
    # results never depend on the number of workers.
    CHUNK_SIZE: int = int(os.getenv("PATHHOM_CHUNK_SIZE", "250"))

    # Census limits: canonical forms are minimized over all n! relabelings
    MAX_CENSUS_VERTICES = 7
    MAX_DIGRAPH_CENSUS_VERTICES = 5

    # Case-study datasets. `file` is the contact list inside the download;
    # `days` limits the stream to its first N days of activity.
    DATASETS = {
        "mathoverflow": {
            "url": "https://snap.stanford.edu/data/sx-mathoverflow-a2q.txt.gz",
            "file": "sx-mathoverflow-a2q.txt",
            "window": "time:24h:8h",
            "days": None,
        },
        "email": {
            "url": "https://snap.stanford.edu/data/email-Eu-core-temporal.txt.gz",
            "file": "email-Eu-core-temporal.txt",
            "window": "count:100:50",
            "days": None,
        },
        "facebook": {
            "url": "http://konect.cc/files/download.tsv.facebook-wosn-wall.tar.bz2",
            "file": "out.facebook-wosn-wall",
            "window": "day",
            "days": 1000,
        },
    }


settings = Settings()
