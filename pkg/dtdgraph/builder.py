# -*- encoding: utf8 -*-

"""
Lowering of a parsed DTD into a :class:`~dtdgraph.graph.SchemaGraph`.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import FrozenSet, Mapping, Tuple

import networkx as nx

from dtdgraph.annotations import RefAnnotation
from dtdgraph.dtd import (AttributeKind, DefaultKind, ModelKind, Occurrence,
                          GENERIC_KINDS)
from dtdgraph.graph import (NodeKind, GroupKind, CloudReason, EdgeKind,
                            ElementNode, TextLeaf, AttributeBlock, GroupNode,
                            CloudNode, AttributeRow, SchemaGraph, Provenance,
                            containment, attachment, reflink,
                            containment_graph, element_id, attributes_id,
                            text_id, group_id, cloud_id)
from dtdgraph.util import Diagnostic, WARNING, INFO

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BuildOptions:
    annotations: Tuple[RefAnnotation, ...] = ()
    collapse: FrozenSet[str] = frozenset()
    text_hints: Mapping[str, str] = field(default_factory=dict)
    heuristic_reflinks: bool = False
    full_enumerations: bool = False


# ------------------------------------------------------------------------------
# attribute rows


def attribute_row(spec, full_enumerations=False):
    """
    Display row of one attribute.

    The name is decorated in a fixed order: braces for an enumeration
    (``name∈{v1,v2}`` listing the values with *full_enumerations*),
    ``#`` for IDREF, ``#(...)`` for IDREFS, a leading ``%`` for
    ``#IMPLIED`` and a trailing ``/'value'`` for a default or fixed value.
    ID rows are underlined instead of decorated; fixed rows are flagged.

    :type spec: dtdgraph.dtd.AttributeSpec
    :rtype: dtdgraph.graph.AttributeRow
    """
    text = spec.name

    if spec.kind is AttributeKind.ENUMERATION and full_enumerations:
        text = '{}\u2208{{{}}}'.format(text, ','.join(spec.values))
    elif spec.kind is AttributeKind.ENUMERATION:
        text = '{' + text + '}'
    elif spec.kind is AttributeKind.IDREF:
        text = '#' + text
    elif spec.kind is AttributeKind.IDREFS:
        text = '#(' + text + ')'

    if spec.default is DefaultKind.IMPLIED:
        text = '%' + text
    elif spec.default in (DefaultKind.DEFAULT, DefaultKind.FIXED):
        text += "/'{}'".format(spec.value)

    return AttributeRow(spec.name, text, spec.kind,
                        underline=spec.kind is AttributeKind.ID,
                        fixed=spec.default is DefaultKind.FIXED)


def format_attribute(spec, full_enumerations=False):
    return attribute_row(spec, full_enumerations).text


# ------------------------------------------------------------------------------
# graph construction


def _location(decl):
    return decl.location.line, decl.location.column


class _GraphBuilder(object):

    def __init__(self, ast, opts):
        self.ast = ast
        self.opts = opts
        self.declared = {decl.name: decl for decl in ast.elements()}
        self.nodes = list()
        self.edges = list()
        self.diagnostics = list()
        self._undeclared = set()

    def add(self, node):
        self.nodes.append(node)
        return node.id

    def diagnose(self, code, message, severity, subjects=(), decl=None):
        self.diagnostics.append(Diagnostic(
            code, message, severity, tuple(subjects),
            _location(decl) if decl is not None else None))

    # --------------------------------------------------------------------------

    def build(self):
        root, unreferenced = self._infer_root()
        for entity, system_id in self.ast.unresolved_entities:
            self.diagnose('UnresolvedEntity',
                          'parameter entity %{}; ({}) was not read and is '
                          'drawn as a cloud'.format(entity, system_id),
                          INFO, [entity])
        attributes = self._merge_attlists()

        for decl in self.ast.elements():
            self.add(ElementNode(element_id(decl.name), decl.name,
                                 decl.name in unreferenced))
            if decl.content.kind is not ModelKind.EMPTY:
                self._lower(decl, element_id(decl.name), decl.content, '0',
                            nested=False, seq_index=None)
            if attributes.get(decl.name):
                self._attribute_block(decl, attributes[decl.name])

        blocks = {node.owner: node for node in self.nodes
                  if node.kind is NodeKind.ATTRIBUTES}
        self._ref_links(blocks)

        graph = SchemaGraph.of(self.nodes, self.edges,
                               element_id(root) if root else None,
                               Provenance(self.ast.source, self.ast.digest))

        if self.opts.heuristic_reflinks:
            self._propose_links(graph)

        graph = SchemaGraph(graph.nodes, graph.edges, graph.root,
                            graph.provenance, tuple(self.diagnostics))
        if self.opts.collapse:
            graph = collapse(graph, self.opts.collapse)

        logger.debug('%s: %d nodes, %d edges', self.ast.source,
                     len(graph.nodes), len(graph.edges))
        return graph

    def _infer_root(self):
        referenced = set()
        for decl in self.ast.elements():
            referenced.update(name for name in decl.content.names()
                              if name != decl.name)
        candidates = [decl.name for decl in self.ast.elements()
                      if decl.name not in referenced]

        if len(candidates) == 1:
            return candidates[0], self._unreachable(candidates)

        if candidates:
            message = 'no unique root element; candidates: {}'.format(
                ', '.join(candidates))
        else:
            message = 'no unique root element; every element is referenced'
        self.diagnose('RootNotInferred', message, WARNING, candidates)
        for name in candidates:
            self.diagnose('UnreferencedElement',
                          'element {!r} is not used by any other '
                          'element'.format(name),
                          INFO, [element_id(name)], self.declared[name])
        return None, set(candidates) | self._unreachable(candidates)

    def _unreachable(self, starts):
        digraph = nx.DiGraph()
        for decl in self.ast.elements():
            digraph.add_node(decl.name)
            digraph.add_edges_from((decl.name, child)
                                   for child in decl.content.names()
                                   if child in self.declared)
        reached = set(starts)
        for name in starts:
            reached.update(nx.descendants(digraph, name))

        unreachable = set()
        for decl in self.ast.elements():
            if decl.name in reached or decl.name in unreachable:
                continue
            unreachable.add(decl.name)
            self.diagnose('UnreferencedElement',
                          'element {!r} cannot be reached from {}'.format(
                              decl.name, ', '.join(starts) or 'any root'),
                          INFO, [element_id(decl.name)], decl)
        return unreachable

    def _merge_attlists(self):
        attributes = dict()
        for attlist in self.ast.attlists():
            if attlist.element not in self.declared:
                self.diagnose('AttListForUndeclaredElement',
                              'attribute list for undeclared element {!r} '
                              'is ignored'.format(attlist.element),
                              WARNING, [attlist.element], attlist)
                continue
            merged = attributes.setdefault(attlist.element, dict())
            for spec in attlist.attributes:
                if spec.name in merged:
                    self.diagnose('DuplicateAttribute',
                                  'attribute {}.{} is declared again; the '
                                  'first declaration is kept'.format(
                                      attlist.element, spec.name),
                                  INFO, [attributes_id(attlist.element)],
                                  attlist)
                    continue
                merged[spec.name] = spec
        return {name: list(specs.values())
                for name, specs in attributes.items()}

    def _lower(self, decl, parent, model, path, nested, seq_index):
        owner = decl.name

        # a parenthesized single particle without an operator is drawn as
        # the particle itself
        while model.is_group and len(model.children) == 1 and \
                model.occurrence is Occurrence.ONE:
            model = model.children[0]
            path += '.1'

        if model.kind is ModelKind.PCDATA:
            target = self.add(TextLeaf(text_id(owner), owner,
                                       self.opts.text_hints.get(owner, '')))
        elif model.kind is ModelKind.ANY:
            target = self.add(CloudNode(cloud_id(owner, 'any'), 'ANY',
                                        CloudReason.ANY, owner))
        elif model.kind is ModelKind.EXTERNAL:
            target = self.add(CloudNode(cloud_id(owner, path),
                                        '%{};'.format(model.name),
                                        CloudReason.EXTERNAL, owner))
        elif model.kind is ModelKind.NAME:
            target = self._child_element(decl, model.name)
        else:
            group = GroupKind.SEQ if model.kind is ModelKind.SEQ \
                else GroupKind.ALT
            subgroup = nested or model.occurrence is not Occurrence.ONE
            target = self.add(GroupNode(group_id(owner, path), owner, group,
                                        subgroup))

        self.edges.append(containment(parent, target, model.occurrence,
                                      seq_index))

        if model.is_group:
            for i, child in enumerate(model.children, start=1):
                self._lower(decl, target, child, '{}.{}'.format(path, i),
                            nested=True,
                            seq_index=i if model.kind is ModelKind.SEQ
                            else None)

    def _child_element(self, decl, name):
        if name in self.declared:
            return element_id(name)

        placeholder = cloud_id(name, 'undeclared')
        if name not in self._undeclared:
            self._undeclared.add(name)
            self.add(CloudNode(placeholder, name, CloudReason.UNDECLARED))
            self.diagnose('UndeclaredChildElement',
                          'element {!r} used in {!r} is never '
                          'declared'.format(name, decl.name),
                          WARNING, [placeholder], decl)
        return placeholder

    def _attribute_block(self, decl, specs):
        rows = list()
        for spec in specs:
            if spec.kind in GENERIC_KINDS:
                self.diagnose('ReducedFidelity',
                              '{} attribute {}.{} is drawn like '
                              'CDATA'.format(spec.kind.value, decl.name,
                                             spec.name),
                              INFO, [attributes_id(decl.name)], decl)
            rows.append(attribute_row(spec, self.opts.full_enumerations))

        block = self.add(AttributeBlock(attributes_id(decl.name), decl.name,
                                        tuple(rows)))
        self.edges.append(attachment(element_id(decl.name), block))

    def _ref_links(self, blocks):
        seen = set()
        for annotation in self.opts.annotations:
            edge = self._ref_link(annotation, blocks)
            if edge is None or edge in seen:
                continue
            seen.add(edge)
            self.edges.append(edge)

    def _ref_link(self, annotation, blocks):
        def mismatch(message):
            where = 'annotation line {}: '.format(annotation.line) \
                if annotation.line else ''
            self.diagnose('AnnotationMismatch', '{}{}: {}'.format(
                where, annotation, message), WARNING,
                [attributes_id(annotation.source_element)])

        source = blocks.get(annotation.source_element)
        row = source.row(annotation.source_attribute) if source else None
        if row is None:
            mismatch('no attribute {!r} on element {!r}'.format(
                annotation.source_attribute, annotation.source_element))
            return None
        if not row.is_reference:
            mismatch('attribute is {}, not IDREF or IDREFS'.format(
                row.kind.value))
            return None

        target = blocks.get(annotation.target_element)
        id_rows = [r for r in target.rows if r.kind is AttributeKind.ID] \
            if target else []
        if not id_rows:
            mismatch('element {!r} has no ID attribute'.format(
                annotation.target_element))
            return None

        return reflink(source.id, row.name, target.id, id_rows[0].name)

    def _propose_links(self, graph):
        annotated = {(a.source_element, a.source_attribute)
                     for a in self.opts.annotations}
        for proposal in infer_ref_links_heuristic(graph):
            if (proposal.source_element,
                    proposal.source_attribute) in annotated:
                continue
            self.diagnose('ProposedRefLink',
                          'proposed link: {}'.format(proposal), INFO,
                          [attributes_id(proposal.source_element)])


def build_graph(ast, opts=None):
    """
    Build the schema graph of *ast*.

    :param ast: a :class:`~dtdgraph.dtd.DtdAst` whose parameter entities
        have been expanded
    :param opts: :class:`BuildOptions`; defaults apply when omitted
    :return: :class:`~dtdgraph.graph.SchemaGraph` whose ``diagnostics``
        holds every non-fatal finding
    :raises ValueError: *ast* still contains unexpanded parameter entities
    """
    if not ast.is_expanded:
        raise ValueError('parameter entities must be expanded before '
                         'building the graph')
    return _GraphBuilder(ast, opts or BuildOptions()).build()


# ------------------------------------------------------------------------------
# ref-link proposals


def infer_ref_links_heuristic(g):
    """
    Propose ref-link annotations for the IDREF(S) attributes of *g*.

    When exactly one element owns an ID attribute, every reference points
    to it. Otherwise a reference is proposed only when its attribute name
    is the name of an element owning an ID.

    :return: sorted list of :class:`~dtdgraph.annotations.RefAnnotation`
    """
    blocks = g.nodes_of(NodeKind.ATTRIBUTES)
    id_owners = [block.owner for block in blocks
                 if any(row.kind is AttributeKind.ID for row in block.rows)]

    proposals = list()
    for block in blocks:
        for row in block.rows:
            if not row.is_reference:
                continue
            if len(id_owners) == 1:
                proposals.append(RefAnnotation(block.owner, row.name,
                                               id_owners[0]))
            elif row.name in id_owners:
                proposals.append(RefAnnotation(block.owner, row.name,
                                               row.name))
    return sorted(proposals)


# ------------------------------------------------------------------------------
# collapsing


def _collapse_one(g, element):
    x = element.id
    cloud = cloud_id(element.name, 'collapsed')

    digraph = containment_graph(g)
    below = nx.descendants(digraph, x)

    rest = digraph.copy()
    rest.remove_node(x)
    reached = set(n for n in rest if n not in below)
    for node_id in list(reached):
        reached.update(nx.descendants(rest, node_id))
    removed = below - reached

    for node_id in list(removed):
        node = g.nodes[node_id]
        if node.kind is NodeKind.ELEMENT:
            block = attributes_id(node.name)
            if block in g.nodes:
                removed.add(block)

    logger.debug('collapse %s: %d nodes removed', element.name,
                 len(removed))

    nodes = [node for node_id, node in g.nodes.items()
             if node_id not in removed]
    nodes.append(CloudNode(cloud, element.name, CloudReason.COLLAPSED,
                           element.name))

    edges = list()
    insert_at = None
    for edge in g.edges:
        if edge.source == x and insert_at is None:
            insert_at = len(edges)
        if edge.source in removed or edge.target in removed:
            continue
        if edge.source == x and edge.kind is EdgeKind.CONTAINMENT:
            continue
        edges.append(edge)
    if insert_at is None:
        insert_at = len(edges)
    edges.insert(insert_at, containment(x, cloud))

    root = g.root if g.root not in removed else None
    collapsed = SchemaGraph.of(nodes, edges, root, g.provenance)
    return _flag_unreachable(collapsed, g.diagnostics)


def _flag_unreachable(g, diagnostics):
    if g.root is None:
        return SchemaGraph(g.nodes, g.edges, g.root, g.provenance,
                           diagnostics)

    reached = nx.descendants(containment_graph(g), g.root) | {g.root}
    nodes = list()
    diagnostics = list(diagnostics)
    for node in g.nodes.values():
        if node.kind is NodeKind.ELEMENT and not node.unreferenced and \
                node.id not in reached:
            node = replace(node, unreferenced=True)
            diagnostics.append(Diagnostic(
                'UnreferencedElement',
                'element {!r} cannot be reached from {} after '
                'collapsing'.format(node.name, g.root),
                INFO, (node.id,)))
        nodes.append(node)
    return SchemaGraph.of(nodes, g.edges, g.root, g.provenance,
                          tuple(diagnostics))


def collapse(g, names):
    """
    Replace the content of each element in *names* by a single cloud.

    Nodes reachable only through a collapsed element are removed with
    their attribute blocks and ref-links; nodes also reachable from
    elsewhere stay. The element keeps its own attribute block. Collapsing
    is idempotent.

    An element already removed by an earlier name is skipped silently.

    :return: a new :class:`~dtdgraph.graph.SchemaGraph`; names that are
        not elements of *g* are reported as ``UnknownCollapseTarget``
        diagnostics on it
    """
    original = g
    diagnostics = list()
    for name in sorted(names):
        element = g.element(name)
        if element is None and original.element(name) is not None:
            continue
        if element is None:
            diagnostics.append(Diagnostic(
                'UnknownCollapseTarget',
                'cannot collapse {!r}: no such element'.format(name),
                WARNING, (name,)))
            continue
        g = _collapse_one(g, element)

    if not diagnostics:
        return g
    return SchemaGraph(g.nodes, g.edges, g.root, g.provenance,
                       g.diagnostics + tuple(diagnostics))



# ------------------------------------------------------------------------------
# secondary graphs


def secondary_graph(g, name):
    """
    The part of *g* below element *name*, as a graph of its own rooted at
    that element: every node it contains directly or through groups, the
    attribute blocks of the elements kept and the ref-links among them.

    This is what a collapsed element hides, so it can be drawn on its own.

    :raises KeyError: *g* has no element *name*
    """
    element = g.element(name)
    if element is None:
        raise KeyError('no such element -- ' + name)

    kept = nx.descendants(containment_graph(g), element.id) | {element.id}
    for node_id in list(kept):
        node = g.nodes[node_id]
        if node.kind is NodeKind.ELEMENT and \
                attributes_id(node.name) in g.nodes:
            kept.add(attributes_id(node.name))

    nodes = list()
    for node_id, node in g.nodes.items():
        if node_id not in kept:
            continue
        if node.kind is NodeKind.ELEMENT and node.unreferenced:
            node = replace(node, unreferenced=False)
        nodes.append(node)
    edges = [edge for edge in g.edges
             if edge.source in kept and edge.target in kept]

    logger.debug('secondary graph of %s: %d nodes', name, len(nodes))
    return SchemaGraph.of(nodes, edges, element.id, g.provenance)
