# -*- encoding: utf8 -*-

import os
import sys
from dataclasses import dataclass, field
from itertools import groupby
from typing import Optional, Tuple

ENCODING = 'utf8'

FORMAT_VERSION = 1  # "format" field of the canonical JSON

SEP_PATH = '/'  # separator inside node ids (element/client, group/AMV/0)

# ------------------------------------------------------------------------------
# rendering defaults, the "factory settings" of RenderStyle

STYLE = {'element_fill': 'palegreen',
         'text_fill': 'white',
         'attribute_fill': 'yellow',
         'subgroup_fill': 'orange',
         'rankdir': 'TB',  # TB, LR, BT or RL
         'show_attributes': True,
         'show_reflinks': True,
         }

STYLE_HINTS = {'element_fill': 'fill of element boxes',
               'text_fill': 'fill of text leaves',
               'attribute_fill': 'fill of attribute blocks',
               'subgroup_fill': 'background of subgroup zones',
               'rankdir': 'TB, LR, BT or RL',
               'show_attributes': 'draw attribute blocks',
               'show_reflinks': 'draw ID/IDREF links',
               }

RANKDIRS = ('TB', 'LR', 'BT', 'RL')

# Crow's-Foot arrowheads, keyed by Occurrence.key; the glyph sits at the
# child end of a containment edge.
GLYPHS = {'one': 'teetee',
          'optional': 'teeodot',
          'zero_or_more': 'crowodot',
          'one_or_more': 'crowtee',
          }

GLYPH_MEANINGS = {'one': 'exactly one',
                  'optional': 'zero or one (?)',
                  'zero_or_more': 'zero or more (*)',
                  'one_or_more': 'one or more (+)',
                  }

# ------------------------------------------------------------------------------
# diagnostics

ERROR = 'error'
WARNING = 'warning'
INFO = 'info'

_SEVERITY_COLORS = {ERROR: '\033[31m', WARNING: '\033[33m', INFO: '\033[36m'}
_RESET = '\033[0m'


@dataclass(frozen=True)
class Diagnostic:
    """
    A finding about a DTD or a graph; data, not a failure.

    *subjects* names the node ids (or element/attribute names) involved;
    *location* is a ``(line, column)`` pair when the finding comes from a
    declaration.
    """
    code: str
    message: str
    severity: str = ERROR
    subjects: Tuple[str, ...] = ()
    location: Optional[Tuple[int, int]] = field(default=None)

    def sort_key(self):
        if self.location is None:
            return 1, 0, 0
        return 0, self.location[0], self.location[1]

    def format(self, source='', color=False):
        prefix = source
        if self.location is not None:
            prefix += ':{}:{}'.format(*self.location)
        severity = self.severity
        if color:
            severity = _SEVERITY_COLORS[severity] + severity + _RESET
        if prefix:
            return '{}: {}: {}: {}'.format(prefix, severity, self.code,
                                           self.message)
        return '{}: {}: {}'.format(severity, self.code, self.message)


def has_errors(diagnostics):
    return any(d.severity == ERROR for d in diagnostics)


def double_sorted(input_object, key=lambda x: x, reverse=False,
                  subkey=lambda x: x, subreverse=False):
    new_sorted_list = list()
    sorted_list = sorted(input_object, key=key, reverse=reverse)

    for _, group in groupby(sorted_list, key=key):
        # "group" shares the underlying iterator; materialize before sorting
        sublist = sorted(list(group), key=subkey, reverse=subreverse)
        new_sorted_list.extend(sublist)

    return new_sorted_list


def sort_diagnostics(diagnostics):
    """
    Sort by source location (location-less diagnostics last), then by code
    and message.
    """
    return double_sorted(diagnostics, key=lambda d: d.sort_key(),
                         subkey=lambda d: (d.code, d.message))


def use_color(stream, environ=None):
    """
    Whether diagnostics written to *stream* get ANSI colours, from the
    ``DTDGRAPH_COLOR`` variable (``never``/``always``; TTY detection
    otherwise).
    """
    environ = os.environ if environ is None else environ
    setting = environ.get('DTDGRAPH_COLOR', '').lower()
    if setting == 'never':
        return False
    if setting == 'always':
        return True
    isatty = getattr(stream, 'isatty', None)
    return bool(isatty and isatty()) and sys.platform != 'win32'


def split_pair(text, what='pair'):
    """
    Split ``key=value``; raise ValueError naming *what* otherwise.
    """
    key, sep, value = text.partition('=')
    if not sep or not key:
        raise ValueError('invalid {} (expected key=value): {}'.format(
            what, text))
    return key, value


GRAPH_SCHEMA = os.path.join(os.path.dirname(__file__), 'schema',
                            'graph-format-{}.json'.format(FORMAT_VERSION))
