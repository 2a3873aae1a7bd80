import io
import json
import os
import tempfile


def temp_workspace():
    """Create a temporary working directory."""
    return tempfile.mkdtemp(prefix='work-')


def ensure_dir(path):
    """Create a directory if it does not already exist."""
    if not os.path.isdir(path):
        os.makedirs(path)
    return os.path.abspath(path)


def read_json(path):
    """Load a JSON document from the given path.
    
    :param path: file to read
    :returns: the decoded object
    """
    with io.open(path, encoding='utf-8') as fh:
        return json.load(fh)
