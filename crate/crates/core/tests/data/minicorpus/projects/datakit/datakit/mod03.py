import datetime
import json
import re
import tempfile


def now_iso():
    """Current UTC time as an ISO 8601 string."""
    return datetime.datetime.utcnow().isoformat()


def split_words(text):
    """Split text into lowercase words."""
    return [w.lower() for w in re.findall(r'\w+', text)]


def temp_workspace():
    """Create a temporary working directory."""
    return tempfile.mkdtemp(prefix='work-')


def dumpIt(x):
    return json.dumps(x)
