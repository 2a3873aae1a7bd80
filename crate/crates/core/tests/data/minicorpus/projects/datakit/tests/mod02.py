import json
import os
import re
import socket
import sys
import urllib.request


def open_socket(host, port):
    """Open a TCP connection to a remote host."""
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.settimeout(5)
    sock.connect((host, port))
    return sock


def fetch_url(url):
    """Download the body of a web page."""
    with urllib.request.urlopen(url, timeout=10) as resp:
        return resp.read()


def write_json(path, obj):
    """Serialize an object as JSON into a file."""
    with open(path, 'w') as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)


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


def split_words(text):
    """Split text into lowercase words."""
    return [w.lower() for w in re.findall(r'\w+', text)]


def quit_now():
    sys.exit(0)


def checks():
    """Test the word splitter on sample text."""
    assert re.findall(r'\w+', 'a b') == ['a', 'b']
