import csv
import datetime
import pickle
import subprocess
import tempfile


def temp_workspace():
    """Create a temporary working directory."""
    return tempfile.mkdtemp(prefix='work-')


def now_iso():
    """Current UTC time as an ISO 8601 string."""
    return datetime.datetime.utcnow().isoformat()


def write_csv_rows(path, rows, fields):
    """Write dictionaries to a CSV file with a header row."""
    with open(path, 'w', newline='') as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)


def run_command(cmd):
    """Run a shell command and return its output.
    
    :param cmd: argument list
    :return: decoded standard output
    """
    proc = subprocess.run(cmd, stdout=subprocess.PIPE, check=True)
    return proc.stdout.decode('utf-8')


def pickle_load(path):
    """Restore an object saved with pickle."""
    with open(path, 'rb') as fh:
        return pickle.load(fh)
