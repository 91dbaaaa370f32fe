# -*- encoding: utf8 -*-

import os

from dtdgraph.util import ENCODING, FORMAT_VERSION

_VERSION_PATH = os.path.join(os.path.dirname(__file__), 'VERSION')

with open(_VERSION_PATH, encoding=ENCODING) as f:
    __version__ = f.read().strip()

version_info = tuple(int(part) for part in __version__.split('.'))


def about(prog='dtdgraph'):
    """
    Version line of the command-line tools, naming the JSON format they
    read and write.
    """
    return '{} {} (graph format {})'.format(prog, __version__,
                                            FORMAT_VERSION)
