# -*- encoding: utf8 -*-

"""
The schema graph: an emitter-independent representation of the notation.

Nodes are element boxes, text leaves, attribute blocks, sequence and
alternative groups and clouds; edges are containment edges (with their
cardinality), attribute attachments and ID/IDREF links. A graph is
immutable once built.
"""

import enum
import json
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import jsonschema
import networkx as nx

from dtdgraph.dtd import AttributeKind, Occurrence, REFERENCE_KINDS
from dtdgraph.util import (ENCODING, FORMAT_VERSION, GRAPH_SCHEMA, SEP_PATH,
                           Diagnostic, ERROR)


class NodeKind(enum.Enum):
    ELEMENT = 'element'
    TEXT = 'text'
    ATTRIBUTES = 'attributes'
    GROUP = 'group'
    CLOUD = 'cloud'


class GroupKind(enum.Enum):
    SEQ = 'seq'
    ALT = 'alt'


class CloudReason(enum.Enum):
    EXTERNAL = 'external'      # unresolved parameter entity
    ANY = 'any'                # ANY content
    UNDECLARED = 'undeclared'  # child element without a declaration
    COLLAPSED = 'collapsed'    # content deliberately left out


class EdgeKind(enum.Enum):
    CONTAINMENT = 'containment'
    ATTRIBUTE = 'attribute'
    REFLINK = 'reflink'


# ------------------------------------------------------------------------------
# node ids


def element_id(name):
    return SEP_PATH.join(('element', name))


def attributes_id(owner):
    return SEP_PATH.join(('attributes', owner))


def text_id(owner):
    return SEP_PATH.join(('text', owner))


def group_id(owner, path):
    return SEP_PATH.join(('group', owner, path))


def cloud_id(name, ordinal):
    return SEP_PATH.join(('cloud', name, ordinal))


# ------------------------------------------------------------------------------
# nodes


@dataclass(frozen=True)
class AttributeRow:
    """
    One formatted line of an attribute block.
    """
    name: str
    text: str
    kind: AttributeKind = AttributeKind.CDATA
    underline: bool = False
    fixed: bool = False

    @property
    def is_reference(self):
        return self.kind in REFERENCE_KINDS

    def to_dict(self):
        return {'name': self.name, 'text': self.text,
                'type': self.kind.value, 'underline': self.underline,
                'fixed': self.fixed}

    @classmethod
    def from_dict(cls, data):
        return cls(data['name'], data['text'], AttributeKind(data['type']),
                   data['underline'], data['fixed'])


@dataclass(frozen=True)
class ElementNode:
    id: str
    name: str
    unreferenced: bool = False

    kind = NodeKind.ELEMENT

    def to_dict(self):
        return {'id': self.id, 'kind': self.kind.value, 'name': self.name,
                'unreferenced': self.unreferenced}


@dataclass(frozen=True)
class TextLeaf:
    id: str
    owner: str
    label: str = ''

    kind = NodeKind.TEXT

    def to_dict(self):
        return {'id': self.id, 'kind': self.kind.value, 'owner': self.owner,
                'label': self.label}


@dataclass(frozen=True)
class AttributeBlock:
    id: str
    owner: str
    rows: Tuple[AttributeRow, ...] = ()

    kind = NodeKind.ATTRIBUTES

    def row(self, name):
        for row in self.rows:
            if row.name == name:
                return row
        return None

    def port(self, name):
        for i, row in enumerate(self.rows):
            if row.name == name:
                return 'r{}'.format(i)
        return None

    def to_dict(self):
        return {'id': self.id, 'kind': self.kind.value, 'owner': self.owner,
                'rows': [row.to_dict() for row in self.rows]}


@dataclass(frozen=True)
class GroupNode:
    id: str
    owner: str
    group: GroupKind
    subgroup: bool = False

    kind = NodeKind.GROUP

    def to_dict(self):
        return {'id': self.id, 'kind': self.kind.value, 'owner': self.owner,
                'group': self.group.value, 'subgroup': self.subgroup}


@dataclass(frozen=True)
class CloudNode:
    id: str
    label: str
    reason: CloudReason = CloudReason.EXTERNAL
    owner: Optional[str] = None

    kind = NodeKind.CLOUD

    def to_dict(self):
        return {'id': self.id, 'kind': self.kind.value, 'label': self.label,
                'reason': self.reason.value, 'owner': self.owner}


def node_from_dict(data):
    kind = NodeKind(data['kind'])
    if kind is NodeKind.ELEMENT:
        return ElementNode(data['id'], data['name'], data['unreferenced'])
    if kind is NodeKind.TEXT:
        return TextLeaf(data['id'], data['owner'], data['label'])
    if kind is NodeKind.ATTRIBUTES:
        return AttributeBlock(data['id'], data['owner'],
                              tuple(AttributeRow.from_dict(row)
                                    for row in data['rows']))
    if kind is NodeKind.GROUP:
        return GroupNode(data['id'], data['owner'], GroupKind(data['group']),
                         data['subgroup'])
    return CloudNode(data['id'], data['label'], CloudReason(data['reason']),
                     data['owner'])


# ------------------------------------------------------------------------------
# edges


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    kind: EdgeKind = EdgeKind.CONTAINMENT
    occurrence: Optional[Occurrence] = None
    seq_index: Optional[int] = None
    from_attribute: Optional[str] = None
    to_attribute: Optional[str] = None

    def to_dict(self):
        data = {'from': self.source, 'to': self.target,
                'kind': self.kind.value}
        if self.kind is EdgeKind.CONTAINMENT:
            data['occurrence'] = self.occurrence.key
            data['seq_index'] = self.seq_index
        elif self.kind is EdgeKind.REFLINK:
            data['from_attribute'] = self.from_attribute
            data['to_attribute'] = self.to_attribute
        return data

    @classmethod
    def from_dict(cls, data):
        kind = EdgeKind(data['kind'])
        if kind is EdgeKind.CONTAINMENT:
            return cls(data['from'], data['to'], kind,
                       Occurrence.from_key(data['occurrence']),
                       data['seq_index'])
        if kind is EdgeKind.REFLINK:
            return cls(data['from'], data['to'], kind,
                       from_attribute=data['from_attribute'],
                       to_attribute=data['to_attribute'])
        return cls(data['from'], data['to'], kind)


def containment(source, target, occurrence=Occurrence.ONE, seq_index=None):
    return Edge(source, target, EdgeKind.CONTAINMENT, occurrence, seq_index)


def attachment(element, block):
    return Edge(element, block, EdgeKind.ATTRIBUTE)


def reflink(source_block, from_attribute, target_block, to_attribute):
    return Edge(source_block, target_block, EdgeKind.REFLINK,
                from_attribute=from_attribute, to_attribute=to_attribute)


# ------------------------------------------------------------------------------
# the graph


@dataclass(frozen=True)
class Provenance:
    source: str = ''
    digest: str = ''


@dataclass(frozen=True)
class SchemaGraph:
    nodes: Dict[str, object] = field(default_factory=dict)
    edges: Tuple[Edge, ...] = ()
    root: Optional[str] = None
    provenance: Provenance = Provenance()
    diagnostics: Tuple[Diagnostic, ...] = field(default=(), compare=False)

    @classmethod
    def of(cls, nodes=(), edges=(), root=None, provenance=None,
           diagnostics=()):
        """
        Build a graph from an iterable of nodes (keyed by their ids).
        """
        return cls({node.id: node for node in nodes}, tuple(edges), root,
                   provenance or Provenance(), tuple(diagnostics))

    def node(self, node_id):
        return self.nodes.get(node_id)

    def sorted_nodes(self):
        return [self.nodes[node_id] for node_id in sorted(self.nodes)]

    def nodes_of(self, kind):
        return [node for node in self.sorted_nodes() if node.kind is kind]

    def element(self, name):
        node = self.nodes.get(element_id(name))
        if node is not None and node.kind is NodeKind.ELEMENT:
            return node
        return None

    def attribute_block(self, owner):
        node = self.nodes.get(attributes_id(owner))
        if node is not None and node.kind is NodeKind.ATTRIBUTES:
            return node
        return None

    def out_edges(self, node_id, kind=None):
        return [edge for edge in self.edges if edge.source == node_id and
                (kind is None or edge.kind is kind)]

    def edges_of(self, kind):
        return [edge for edge in self.edges if edge.kind is kind]


def containment_graph(g):
    """
    Directed graph of the containment edges of *g*, over all its nodes.

    :rtype: networkx.DiGraph
    """
    digraph = nx.DiGraph()
    digraph.add_nodes_from(g.nodes)
    digraph.add_edges_from((edge.source, edge.target)
                           for edge in g.edges
                           if edge.kind is EdgeKind.CONTAINMENT)
    return digraph


# ------------------------------------------------------------------------------
# validation


def _diagnostic(code, message, *subjects):
    return Diagnostic(code, message, ERROR, tuple(subjects))


def _edge_name(index, edge):
    return 'edge {} ({} -> {})'.format(index, edge.source, edge.target)


def validate_graph(g):
    """
    Check every structural invariant of *g*.

    :return: list of :class:`Diagnostic`; empty when *g* is valid
    """
    diagnostics = list()
    nodes = g.nodes

    element_names = dict()
    blocks = dict()
    for node_id in sorted(nodes):
        node = nodes[node_id]
        if node.kind is NodeKind.ELEMENT:
            if node.name in element_names:
                diagnostics.append(_diagnostic(
                    'DuplicateElementNode',
                    'element {!r} has more than one node'.format(node.name),
                    element_names[node.name], node_id))
            element_names.setdefault(node.name, node_id)
        elif node.kind is NodeKind.ATTRIBUTES:
            blocks.setdefault(node.owner, list()).append(node_id)

    for owner, block_ids in sorted(blocks.items()):
        if owner not in element_names:
            diagnostics.append(_diagnostic(
                'AttributeBlockOwner',
                'attribute block of undeclared element {!r}'.format(owner),
                *block_ids))
        if len(block_ids) > 1:
            diagnostics.append(_diagnostic(
                'DuplicateAttributeBlock',
                'element {!r} has {} attribute blocks'.format(
                    owner, len(block_ids)),
                *block_ids))

    attachments = dict()
    seq_indices = dict()
    group_out = dict()

    for index, edge in enumerate(g.edges):
        source, target = nodes.get(edge.source), nodes.get(edge.target)
        if source is None or target is None:
            diagnostics.append(_diagnostic(
                'DanglingEdge',
                '{} has an endpoint missing from the graph'.format(
                    _edge_name(index, edge)),
                edge.source, edge.target))
            continue

        if edge.kind is EdgeKind.CONTAINMENT:
            if (source.kind not in (NodeKind.ELEMENT, NodeKind.GROUP) or
                    target.kind is NodeKind.ATTRIBUTES):
                diagnostics.append(_diagnostic(
                    'InvalidContainment',
                    '{} cannot contain {}'.format(source.kind.value,
                                                  target.kind.value),
                    edge.source, edge.target))
                continue
            if source.kind is NodeKind.GROUP:
                group_out[edge.source] = group_out.get(edge.source, 0) + 1
            if source.kind is NodeKind.GROUP and \
                    source.group is GroupKind.SEQ:
                if edge.seq_index is None:
                    diagnostics.append(_diagnostic(
                        'MissingSeqIndex',
                        '{} leaves a sequence without an order index'.format(
                            _edge_name(index, edge)),
                        edge.source, edge.target))
                else:
                    seq_indices.setdefault(edge.source, list()).append(
                        edge.seq_index)
            elif edge.seq_index is not None:
                diagnostics.append(_diagnostic(
                    'UnexpectedSeqIndex',
                    '{} carries an order index outside a sequence'.format(
                        _edge_name(index, edge)),
                    edge.source, edge.target))

        elif edge.kind is EdgeKind.ATTRIBUTE:
            if (source.kind is not NodeKind.ELEMENT or
                    target.kind is not NodeKind.ATTRIBUTES or
                    target.owner != source.name):
                diagnostics.append(_diagnostic(
                    'AttributeBlockOwner',
                    '{} does not attach an element to its own attribute '
                    'block'.format(_edge_name(index, edge)),
                    edge.source, edge.target))
                continue
            attachments[edge.target] = attachments.get(edge.target, 0) + 1

        else:
            diagnostics.extend(_check_reflink(index, edge, source, target))

    for owner, block_ids in sorted(blocks.items()):
        for block_id in block_ids:
            count = attachments.get(block_id, 0)
            if count == 0:
                diagnostics.append(_diagnostic(
                    'MissingAttributeAttachment',
                    'attribute block {} is not attached to {!r}'.format(
                        block_id, owner),
                    block_id))
            elif count > 1:
                diagnostics.append(_diagnostic(
                    'DuplicateAttributeAttachment',
                    'attribute block {} is attached {} times'.format(
                        block_id, count),
                    block_id))

    for node in g.nodes_of(NodeKind.GROUP):
        if group_out.get(node.id, 0) == 0:
            diagnostics.append(_diagnostic(
                'EmptyGroup', 'group {} contains nothing'.format(node.id),
                node.id))
        indices = sorted(seq_indices.get(node.id, ()))
        if indices and indices != list(range(1, len(indices) + 1)):
            diagnostics.append(_diagnostic(
                'NonConsecutiveSeqIndex',
                'sequence {} has order indices {}, expected 1..{}'.format(
                    node.id, indices, len(indices)),
                node.id))

    digraph = containment_graph(g)
    for component in nx.strongly_connected_components(digraph):
        groups = sorted(node_id for node_id in component
                        if node_id in nodes and
                        nodes[node_id].kind is NodeKind.GROUP)
        if groups and (len(component) > 1 or
                       digraph.has_edge(groups[0], groups[0])):
            diagnostics.append(_diagnostic(
                'GroupCycle',
                'groups {} lie on a containment cycle'.format(
                    ', '.join(groups)),
                *groups))

    if g.root is not None:
        root = nodes.get(g.root)
        if root is None or root.kind is not NodeKind.ELEMENT:
            diagnostics.append(_diagnostic(
                'InvalidRoot', 'root {} is not an element node'.format(
                    g.root),
                g.root))
        else:
            reached = nx.descendants(digraph, g.root) | {g.root}
            for node in g.nodes_of(NodeKind.ELEMENT):
                if node.id not in reached and not node.unreferenced:
                    diagnostics.append(_diagnostic(
                        'UnreachableElement',
                        'element {!r} cannot be reached from {} and is not '
                        'flagged unreferenced'.format(node.name, g.root),
                        node.id))

    return diagnostics


def _check_reflink(index, edge, source, target):
    if (source.kind is not NodeKind.ATTRIBUTES or
            target.kind is not NodeKind.ATTRIBUTES):
        return [_diagnostic(
            'InvalidContainment',
            '{} must link two attribute blocks'.format(
                _edge_name(index, edge)),
            edge.source, edge.target)]

    diagnostics = list()
    from_row = source.row(edge.from_attribute)
    to_row = target.row(edge.to_attribute)
    if from_row is None or to_row is None:
        return [_diagnostic(
            'UnknownAttributeRow',
            '{} names an attribute missing from its block'.format(
                _edge_name(index, edge)),
            edge.source, edge.target)]
    if not from_row.is_reference:
        diagnostics.append(_diagnostic(
            'RefLinkSourceNotIdRef',
            'link source {}.{} is {}, not IDREF or IDREFS'.format(
                source.owner, from_row.name, from_row.kind.value),
            edge.source))
    if to_row.kind is not AttributeKind.ID:
        diagnostics.append(_diagnostic(
            'RefLinkTargetNotId',
            'link target {}.{} is {}, not ID'.format(
                target.owner, to_row.name, to_row.kind.value),
            edge.target))
    return diagnostics


# ------------------------------------------------------------------------------
# canonical JSON


def to_dict(g):
    return {'format': FORMAT_VERSION,
            'nodes': [node.to_dict() for node in g.sorted_nodes()],
            'edges': [edge.to_dict() for edge in g.edges],
            'root': g.root,
            'provenance': {'source': g.provenance.source,
                           'digest': g.provenance.digest}}


def to_json(g):
    """
    Canonical JSON text of *g*: keys sorted, nodes sorted by id, edges in
    graph order, no insignificant whitespace, UTF-8 names unescaped.
    """
    return json.dumps(to_dict(g), ensure_ascii=False, sort_keys=True,
                      separators=(',', ':'))


def from_json(text):
    """
    Rebuild a :class:`SchemaGraph` from its canonical JSON text.

    :raises ValueError: malformed JSON or an unsupported ``format``
    """
    data = json.loads(text)
    if not isinstance(data, dict) or data.get('format') != FORMAT_VERSION:
        raise ValueError('not a format-{} schema graph'.format(
            FORMAT_VERSION))
    try:
        nodes = [node_from_dict(node) for node in data['nodes']]
        edges = [Edge.from_dict(edge) for edge in data['edges']]
        provenance = Provenance(data['provenance']['source'],
                                data['provenance']['digest'])
        root = data['root']
    except (KeyError, TypeError) as error:
        raise ValueError('malformed schema graph: missing {}'.format(error))
    return SchemaGraph.of(nodes, edges, root, provenance)


def load_schema():
    with open(GRAPH_SCHEMA, encoding=ENCODING) as f:
        return json.load(f)


def schema_errors(data):
    """
    Check decoded JSON *data* against the packaged format schema.

    :return: list of ``SchemaViolation`` diagnostics, in document order
    """
    validator = jsonschema.Draft7Validator(load_schema())
    errors = sorted(validator.iter_errors(data),
                    key=lambda e: [str(part) for part in e.absolute_path])
    return [Diagnostic('SchemaViolation', '{}: {}'.format(
                '/'.join(str(part) for part in error.absolute_path) or '(top)',
                error.message), ERROR)
            for error in errors]
