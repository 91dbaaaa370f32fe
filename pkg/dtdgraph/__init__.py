# -*- encoding: utf8 -*-

from dtdgraph.release import __version__
from dtdgraph.util import ENCODING
from dtdgraph.dtd import DtdAst, serialize_dtd
from dtdgraph.parser import (tokenize, parse_content_model, parse_dtd,
                             expand_parameter_entities)
from dtdgraph.graph import (SchemaGraph, validate_graph, to_json, from_json,
                            containment_graph)
from dtdgraph.annotations import RefAnnotation, read_annotations
from dtdgraph.builder import (BuildOptions, attribute_row, format_attribute,
                              build_graph, infer_ref_links_heuristic,
                              collapse, secondary_graph)
from dtdgraph.dot import RenderStyle, emit_dot, emit_legend
from dtdgraph.dotcheck import check_dot


assert type(__version__) is str


def read_dtd(file_path, encoding=ENCODING, resolver=None):
    """
    Parse a DTD file and expand its parameter entities.

    :param file_path: path of the DTD file
    :param encoding: encoding of the file at *file_path*. Default: ``'utf8'``
    :param resolver: mapping of external system identifiers to their text;
        external entities missing from it are drawn as clouds.
    :rtype: dtdgraph.dtd.DtdAst
    """
    with open(file_path, encoding=encoding) as f:
        text = f.read()
    return from_dtd_text(text, source=file_path, resolver=resolver)


def from_dtd_text(text, source='<string>', resolver=None):
    """
    Parse DTD text and expand its parameter entities.

    :param text: the DTD as a string
    :param source: name recorded as the graph's provenance
    :param resolver: as for :func:`read_dtd`
    :rtype: dtdgraph.dtd.DtdAst
    """
    return expand_parameter_entities(parse_dtd(text, source), resolver)


__all__ = ['__version__', 'DtdAst', 'serialize_dtd', 'tokenize',
           'parse_content_model', 'parse_dtd', 'expand_parameter_entities',
           'SchemaGraph', 'validate_graph', 'to_json', 'from_json',
           'containment_graph', 'RefAnnotation', 'read_annotations',
           'BuildOptions', 'attribute_row', 'format_attribute', 'build_graph',
           'infer_ref_links_heuristic', 'collapse', 'secondary_graph',
           'RenderStyle', 'emit_dot', 'emit_legend', 'check_dot', 'read_dtd',
           'from_dtd_text']
