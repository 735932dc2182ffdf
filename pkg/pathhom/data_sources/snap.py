"""
Downloader for the public temporal network datasets (SNAP and KONECT).

Datasets are declared in settings.DATASETS; each entry names the download
URL and the contact file inside it. Archives are unpacked next to the
download and the contact file path is returned.
"""
import bz2
import gzip
import shutil
import tarfile
import time
from pathlib import Path
from typing import Optional

import certifi
import requests

from pathhom.config.settings import settings
from pathhom.errors import DatasetError
from pathhom.utils.logger import logger

# Retry configuration
MAX_RETRIES = settings.HTTP_RETRIES
RETRY_DELAY = 2  # seconds
TIMEOUT = settings.HTTP_TIMEOUT  # seconds


def _download(url: str, dest: Path, retries: int = 0) -> Path:
    """
    Stream ``url`` into ``dest`` with retry logic and exponential backoff.

    Args:
        url: Full URL to download
        dest: Target file (overwritten)
        retries: Current retry attempt (internal use)

    Returns:
        ``dest``

    Raises:
        DatasetError: If the server refuses or all retries fail
    """
    try:
        with requests.get(url, stream=True, timeout=TIMEOUT, verify=certifi.where()) as response:
            response.raise_for_status()
            dest.parent.mkdir(parents=True, exist_ok=True)
            with open(dest, "wb") as handle:
                for block in response.iter_content(chunk_size=1 << 16):
                    handle.write(block)
        return dest

    except requests.exceptions.HTTPError as e:
        status = e.response.status_code if e.response is not None else None
        if status in (429, 502, 503) and retries < MAX_RETRIES:
            wait_time = RETRY_DELAY * (2 ** retries)  # Exponential backoff
            logger.warning(f"Server busy ({status}). Retrying in {wait_time}s... (attempt {retries + 1}/{MAX_RETRIES})")
            time.sleep(wait_time)
            return _download(url, dest, retries + 1)
        if status == 404:
            logger.error(f"Dataset not found: {url}")
        else:
            logger.error(f"HTTP error {status}: {url}")
        raise DatasetError(f"download failed with HTTP {status}: {url}", details={"url": url, "status": status})

    except requests.exceptions.Timeout:
        if retries < MAX_RETRIES:
            wait_time = RETRY_DELAY * (2 ** retries)
            logger.warning(f"Download timeout. Retrying in {wait_time}s... (attempt {retries + 1}/{MAX_RETRIES})")
            time.sleep(wait_time)
            return _download(url, dest, retries + 1)
        logger.error(f"Max retries exceeded due to timeout for {url}")
        raise DatasetError(f"download timed out: {url}", details={"url": url})

    except requests.exceptions.RequestException as e:
        logger.error(f"Download failed for {url}: {str(e)}")
        raise DatasetError(f"download failed: {url}: {e}", details={"url": url})


def _unpack(archive: Path, member: str, dest_dir: Path) -> Path:
    target = dest_dir / member
    name = archive.name
    if name.endswith((".tar.bz2", ".tar.gz", ".tgz")):
        with tarfile.open(archive) as tar:
            found = next((m for m in tar.getmembers() if Path(m.name).name == member and m.isfile()), None)
            if found is None:
                raise DatasetError(f"{member} not found inside {name}", details={"archive": str(archive)})
            with tar.extractfile(found) as source, open(target, "wb") as handle:
                shutil.copyfileobj(source, handle)
    elif name.endswith(".gz"):
        with gzip.open(archive, "rb") as source, open(target, "wb") as handle:
            shutil.copyfileobj(source, handle)
    elif name.endswith(".bz2"):
        with bz2.open(archive, "rb") as source, open(target, "wb") as handle:
            shutil.copyfileobj(source, handle)
    else:
        shutil.copyfile(archive, target)
    return target


def dataset_path(name: str, dest_dir: Optional[Path] = None) -> Path:
    """Where the contact file of a dataset lives once downloaded."""
    if name not in settings.DATASETS:
        raise DatasetError(f"unknown dataset {name!r}; known: {', '.join(sorted(settings.DATASETS))}")
    return Path(dest_dir or settings.DATA_DIR) / settings.DATASETS[name]["file"]


def download_dataset(name: str, dest_dir: Optional[Path] = None, force: bool = False) -> Path:
    """
    Fetch a dataset and unpack its contact file.

    Args:
        name: Key of settings.DATASETS (mathoverflow, email, facebook)
        dest_dir: Download directory (default: PATHHOM_DATA_DIR)
        force: Download again even if the contact file exists

    Returns:
        Path of the contact file

    Example:
        path = download_dataset("email")
    """
    target = dataset_path(name, dest_dir)
    if target.exists() and not force:
        logger.info(f"Dataset {name} already present at {target}")
        return target

    url = settings.DATASETS[name]["url"]
    archive = target.parent / url.rsplit("/", 1)[-1]
    logger.info(f"Downloading {name} from {url}")
    _download(url, archive)
    path = _unpack(archive, target.name, target.parent)
    logger.info(f"Dataset {name} ready at {path}")
    return path
