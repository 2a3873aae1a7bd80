import os
import pickle
import urllib.request


def fetch_url(url):
    """Download the body of a web page."""
    with urllib.request.urlopen(url, timeout=10) as resp:
        return resp.read()


def env_flag(name):
    """Read a boolean flag from the environment."""
    return os.environ.get(name, '').lower() in ('1', 'true', 'yes')


def list_python_files(root):
    """Walk a directory tree and collect python files.
    
    Returns:
        sorted list of paths
    """
    out = []
    for base, _, files in os.walk(root):
        for f in files:
            if f.endswith('.py'):
                out.append(os.path.join(base, f))
    return sorted(out)


def pickle_save(path, obj):
    """Persist an object with pickle."""
    with open(path, 'wb') as fh:
        pickle.dump(obj, fh)
