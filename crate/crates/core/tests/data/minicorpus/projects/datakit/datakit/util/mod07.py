import hashlib
import os
import re
import unicodedata


def slugify(title):
    """Turn a title into a URL friendly slug."""
    text = unicodedata.normalize('NFKD', title)
    text = re.sub(r'[^\w\s-]', '', text).strip().lower()
    return re.sub(r'[-\s]+', '-', text)


def file_digest(path):
    """Compute the sha256 digest of a file in chunks."""
    h = hashlib.sha256()
    with open(path, 'rb') as fh:
        for chunk in iter(lambda: fh.read(65536), b''):
            h.update(chunk)
    return h.hexdigest()


def env_flag(name):
    """Read a boolean flag from the environment."""
    return os.environ.get(name, '').lower() in ('1', 'true', 'yes')
