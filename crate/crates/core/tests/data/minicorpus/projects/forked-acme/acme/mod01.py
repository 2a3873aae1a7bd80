import datetime
import pickle
import subprocess
import tempfile


def pickle_save(path, obj):
    """Persist an object with pickle."""
    with open(path, 'wb') as fh:
        pickle.dump(obj, fh)


def now_iso():
    """Current UTC time as an ISO 8601 string."""
    return datetime.datetime.utcnow().isoformat()


def temp_workspace():
    """Create a temporary working directory."""
    return tempfile.mkdtemp(prefix='work-')


def run_command(cmd):
    """Run a shell command and return its output.
    
    :param cmd: argument list
    :return: decoded standard output
    """
    proc = subprocess.run(cmd, stdout=subprocess.PIPE, check=True)
    return proc.stdout.decode('utf-8')
