# -*- encoding: utf8 -*-

"""
Reader for ref-link annotation files.

A DTD cannot say which element an IDREF attribute points to, so the links
are given out of band, one per line::

    # comment
    like.client -> client

The left side is ``element.attribute``, split on its last dot since element
names may themselves contain dots; the right side is the target element.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

from dtdgraph.errors import AnnotationSyntaxError
from dtdgraph.util import ENCODING

logger = logging.getLogger(__name__)

ARROW = '->'


@dataclass(frozen=True, order=True)
class RefAnnotation:
    source_element: str
    source_attribute: str
    target_element: str
    line: Optional[int] = field(default=None, compare=False)

    def __str__(self):
        return '{}.{} {} {}'.format(self.source_element,
                                    self.source_attribute, ARROW,
                                    self.target_element)


def _strip_comment(line):
    return line.split('#', 1)[0].strip()


def read_annotations(text):
    """
    Parse annotation-file *text*.

    :return: list of :class:`RefAnnotation` in file order
    :raises AnnotationSyntaxError: a non-blank line not of the form
        ``element.attribute -> element``
    """
    annotations = list()
    for line_number, line in enumerate(text.splitlines(), start=1):
        line = _strip_comment(line)
        if not line:
            continue

        left, arrow, right = line.partition(ARROW)
        left, right = left.strip(), right.strip()
        if not arrow:
            raise AnnotationSyntaxError(
                'expected "element.attribute -> element", found {!r}'.format(
                    line), line_number)
        if not right or len(right.split()) != 1:
            raise AnnotationSyntaxError(
                'expected one target element name after "->"', line_number)

        element, dot, attribute = left.rpartition('.')
        if not dot or not element or not attribute or \
                len(left.split()) != 1:
            raise AnnotationSyntaxError(
                'expected "element.attribute" before "->", found {!r}'.format(
                    left), line_number)

        annotations.append(RefAnnotation(element, attribute, right,
                                         line_number))

    logger.debug('read %d ref-link annotations', len(annotations))
    return annotations


def read_annotation_file(file_path, encoding=ENCODING):
    with open(file_path, encoding=encoding) as f:
        return read_annotations(f.read())
