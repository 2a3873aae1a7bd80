import base64
import socket
import sys


def b64_encode(data):
    """Encode bytes as base64 text."""
    return base64.b64encode(data).decode('ascii')


def open_socket(host, port):
    """Open a TCP connection to a remote host."""
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.settimeout(5)
    sock.connect((host, port))
    return sock


def quit_now():
    sys.exit(0)
