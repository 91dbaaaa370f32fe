# -*- encoding: utf8 -*-

"""
DOT rendering of schema graphs.

Element boxes are green, text leaves white and attribute blocks yellow;
sequences are black points with numbered outgoing edges, alternatives are
forks (triangles), subgroups sit in orange clusters and clouds are dashed
ellipses. Cardinalities are Crow's-Foot arrowheads at the child end of
each containment edge.
"""

import html
import logging
from dataclasses import dataclass, field, fields
from typing import Mapping

import graphviz

from dtdgraph.dtd import Occurrence
from dtdgraph.errors import InvalidGraph
from dtdgraph.graph import NodeKind, GroupKind, EdgeKind, validate_graph
from dtdgraph.util import STYLE, GLYPHS, GLYPH_MEANINGS, RANKDIRS

logger = logging.getLogger(__name__)


def _default_glyphs():
    return {Occurrence.from_key(key): glyph for key, glyph in GLYPHS.items()}


@dataclass(frozen=True)
class RenderStyle:
    element_fill: str = STYLE['element_fill']
    text_fill: str = STYLE['text_fill']
    attribute_fill: str = STYLE['attribute_fill']
    subgroup_fill: str = STYLE['subgroup_fill']
    glyph_map: Mapping[Occurrence, str] = field(
        default_factory=_default_glyphs)
    rankdir: str = STYLE['rankdir']
    show_attributes: bool = STYLE['show_attributes']
    show_reflinks: bool = STYLE['show_reflinks']

    def __post_init__(self):
        missing = [o.key for o in Occurrence if o not in self.glyph_map]
        if missing:
            raise ValueError('glyph_map has no arrowhead for: {}'.format(
                ', '.join(missing)))
        if self.rankdir not in RANKDIRS:
            raise ValueError('rankdir must be one of {}, not {!r}'.format(
                ', '.join(RANKDIRS), self.rankdir))

    @classmethod
    def from_overrides(cls, **kwargs):
        """
        Default style with the options in *kwargs* replaced.

        A ``glyph_map`` override may be partial and may be keyed by
        :class:`~dtdgraph.dtd.Occurrence` or by its key (``'optional'``).

        :raises KeyError: an unknown option name
        """
        known = {f.name for f in fields(cls)}
        for key in kwargs:
            if key not in known:
                raise KeyError('unknown style option -- ' + key)

        if 'glyph_map' in kwargs:
            glyphs = _default_glyphs()
            for occurrence, glyph in kwargs['glyph_map'].items():
                if not isinstance(occurrence, Occurrence):
                    occurrence = Occurrence.from_key(occurrence)
                glyphs[occurrence] = glyph
            kwargs['glyph_map'] = glyphs

        return cls(**kwargs)

    def glyph(self, occurrence):
        return self.glyph_map[occurrence]


# ------------------------------------------------------------------------------
# helpers


def dot_id(node_id):
    """
    DOT node name of a node id; ``:`` would read as a port separator.
    """
    return node_id.replace(':', '%3A')


def _cell(row):
    text = html.escape(row.text, quote=False)
    if row.underline:
        text = '<U>{}</U>'.format(text)
    if row.fixed:
        text = '<I>{}</I>'.format(text)
    return text


def attribute_table(rows, fill):
    """
    HTML-like label of an attribute block, one port ``r<i>`` per row.
    """
    cells = ''.join(
        '<TR><TD PORT="r{}" ALIGN="LEFT">{}</TD></TR>'.format(i, _cell(row))
        for i, row in enumerate(rows))
    return ('<<TABLE BORDER="0" CELLBORDER="1" CELLSPACING="0" '
            'BGCOLOR="{}">{}</TABLE>>'.format(fill, cells))


def _node_attrs(node, style):
    if node.kind is NodeKind.ELEMENT:
        return node.name, {'shape': 'box', 'style': 'filled',
                           'fillcolor': style.element_fill}
    if node.kind is NodeKind.TEXT:
        return (graphviz.nohtml(node.label),
                {'shape': 'box', 'style': 'filled',
                 'fillcolor': style.text_fill})
    if node.kind is NodeKind.ATTRIBUTES:
        return (attribute_table(node.rows, style.attribute_fill),
                {'shape': 'none', 'margin': '0'})
    if node.kind is NodeKind.GROUP:
        if node.group is GroupKind.SEQ:
            return '', {'shape': 'point', 'width': '0.12'}
        return '', {'shape': 'triangle', 'width': '0.25', 'height': '0.25',
                    'fixedsize': 'true'}
    return (graphviz.nohtml('~ ' + node.label),
            {'shape': 'ellipse', 'style': 'dashed'})


def _cluster_attrs(style):
    return {'style': 'filled', 'fillcolor': style.subgroup_fill,
            'color': style.subgroup_fill, 'label': ''}


# ------------------------------------------------------------------------------
# emitters


class _DotWriter(object):

    def __init__(self, g, style):
        self.g = g
        self.style = style
        self.children = dict()  # subgroup id -> nested subgroup ids
        self.clustered = set()
        for edge in g.edges_of(EdgeKind.CONTAINMENT):
            parent, child = g.nodes[edge.source], g.nodes[edge.target]
            if (parent.kind is NodeKind.GROUP and parent.subgroup and
                    child.kind is NodeKind.GROUP and child.subgroup):
                self.children.setdefault(parent.id, list()).append(child.id)
                self.clustered.add(child.id)

    def visible(self, node):
        return self.style.show_attributes or \
            node.kind is not NodeKind.ATTRIBUTES

    def node(self, digraph, node):
        label, attrs = _node_attrs(node, self.style)
        digraph.node(dot_id(node.id), label, **attrs)

    def cluster(self, digraph, node):
        with digraph.subgraph(name='cluster_' + dot_id(node.id)) as sub:
            sub.attr(**_cluster_attrs(self.style))
            self.node(sub, node)
            for child_id in sorted(self.children.get(node.id, ())):
                self.cluster(sub, self.g.nodes[child_id])

    def edge(self, digraph, edge):
        tail, head = dot_id(edge.source), dot_id(edge.target)
        if edge.kind is EdgeKind.CONTAINMENT:
            attrs = {'arrowhead': self.style.glyph(edge.occurrence)}
            if edge.seq_index is not None:
                attrs['label'] = str(edge.seq_index)
            digraph.edge(tail, head, **attrs)
        elif edge.kind is EdgeKind.ATTRIBUTE:
            if self.style.show_attributes:
                digraph.edge(tail, head, dir='none')
        elif self.style.show_attributes and self.style.show_reflinks:
            source, target = self.g.nodes[edge.source], \
                self.g.nodes[edge.target]
            digraph.edge('{}:{}'.format(tail, source.port(
                             edge.from_attribute)),
                         '{}:{}'.format(head, target.port(
                             edge.to_attribute)),
                         style='dashed', arrowhead='onormal',
                         constraint='false')

    def write(self):
        digraph = graphviz.Digraph('schema',
                                   graph_attr={'rankdir': self.style.rankdir})
        for node in self.g.sorted_nodes():
            if not self.visible(node) or node.id in self.clustered:
                continue
            if node.kind is NodeKind.GROUP and node.subgroup:
                self.cluster(digraph, node)
            else:
                self.node(digraph, node)
        for edge in self.g.edges:
            self.edge(digraph, edge)
        return digraph.source


def emit_dot(g, style=None):
    """
    DOT text of *g*. Nodes come sorted by id and edges in graph order, so
    equal graphs give identical text.

    :param style: :class:`RenderStyle`; the default style when omitted
    :raises InvalidGraph: *g* fails :func:`~dtdgraph.graph.validate_graph`
    """
    diagnostics = validate_graph(g)
    if diagnostics:
        raise InvalidGraph(diagnostics)
    style = style or RenderStyle()
    logger.debug('emitting DOT for %d nodes', len(g.nodes))
    return _DotWriter(g, style).write()


def emit_legend(style=None):
    """
    Standalone DOT key of the notation: one sample per node kind and one
    row per cardinality glyph, drawn with *style*.
    """
    style = style or RenderStyle()
    digraph = graphviz.Digraph('legend',
                               graph_attr={'rankdir': style.rankdir})

    digraph.node('legend_element', 'element', shape='box', style='filled',
                 fillcolor=style.element_fill)
    digraph.node('legend_text', 'text', shape='box', style='filled',
                 fillcolor=style.text_fill)
    if style.show_attributes:
        digraph.node('legend_attributes',
                     '<<TABLE BORDER="0" CELLBORDER="1" CELLSPACING="0" '
                     'BGCOLOR="{}"><TR><TD ALIGN="LEFT">attribute</TD></TR>'
                     '</TABLE>>'.format(style.attribute_fill),
                     shape='none', margin='0')
    digraph.node('legend_group_seq', '', shape='point', width='0.12',
                 xlabel='sequence')
    with digraph.subgraph(name='cluster_legend_subgroup') as sub:
        sub.attr(**dict(_cluster_attrs(style), label='subgroup'))
        sub.node('legend_group_alt', '', shape='triangle', width='0.25',
                 height='0.25', fixedsize='true', xlabel='alternative')
    digraph.node('legend_cloud', '~ cloud', shape='ellipse', style='dashed')

    for occurrence in Occurrence:
        tail = 'legend_{}'.format(occurrence.key)
        digraph.node(tail, GLYPH_MEANINGS[occurrence.key], shape='plaintext')
        digraph.node(tail + '_child', 'child' + occurrence.marker,
                     shape='box', style='filled',
                     fillcolor=style.element_fill)
        digraph.edge(tail, tail + '_child',
                     arrowhead=style.glyph(occurrence))

    return digraph.source
