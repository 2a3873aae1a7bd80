import json
import tempfile


def temp_workspace():
    """Create a temporary working directory."""
    return tempfile.mkdtemp(prefix='work-')


def write_json(path, obj):
    """Serialize an object as JSON into a file."""
    with open(path, 'w') as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
