import csv
import json
import socket
import urllib.parse


def read_csv_rows(path):
    """Read all rows of a CSV file as dictionaries."""
    with open(path, newline='') as fh:
        return list(csv.DictReader(fh))


def open_socket(host, port):
    """Open a TCP connection to a remote host."""
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.settimeout(5)
    sock.connect((host, port))
    return sock


def encode_query(params):
    """Build a query string from a mapping of parameters."""
    return urllib.parse.urlencode(sorted(params.items()))


def test_read_json():
    """Check that json files load."""
    assert json.loads('{}') == {}
