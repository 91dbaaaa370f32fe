# -*- encoding: utf8 -*-

"""
Checker for the subset of the DOT language that :mod:`dtdgraph.dot`
writes: one (di)graph of node, edge, attribute and assignment statements,
nested subgraphs, ports, quoted and HTML-like ids. Keywords are lowercase.

``check_dot`` parses the text and returns what it declares, so that tests
can assert on structure rather than on strings.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from lark import Lark, Token, Tree
from lark.exceptions import UnexpectedInput

from dtdgraph.errors import DotSyntaxError

GRAMMAR = r'''
    start: graph

    graph: STRICT? (DIGRAPH | GRAPH) id? "{" stmt_list "}"

    stmt_list: (stmt ";"?)*

    ?stmt: attr_stmt
         | assignment
         | edge_stmt
         | node_stmt
         | subgraph

    attr_stmt: (GRAPH | NODE | EDGE) attr_list
    assignment: id "=" id
    node_stmt: node_id attr_list?
    edge_stmt: node_id (EDGEOP node_id)+ attr_list?
    subgraph: (SUBGRAPH id?)? "{" stmt_list "}"

    node_id: id (":" id (":" id)?)?

    attr_list: ("[" (a_item (";" | ",")?)* "]")+
    a_item: id "=" id

    id: NAME | NUMBER | STRING | HTML

    STRICT: "strict"
    DIGRAPH: "digraph"
    GRAPH: "graph"
    NODE: "node"
    EDGE: "edge"
    SUBGRAPH: "subgraph"

    EDGEOP: "->" | "--"
    NAME: /[A-Za-z_\u0080-\uffff][A-Za-z0-9_\u0080-\uffff]*/
    NUMBER: /-?(\.[0-9]+|[0-9]+(\.[0-9]*)?)/
    STRING: /"(?:[^"\\]|\\.)*"/s
    HTML: /<(?:[^<>]|<[^<>]*>)*>/

    COMMENT: /\/\/[^\n]*/ | /\/\*(.|\n)*?\*\// | /^#[^\n]*/m

    %import common.WS
    %ignore WS
    %ignore COMMENT
'''

_parser = None


def _get_parser():
    global _parser
    if _parser is None:
        _parser = Lark(GRAMMAR, parser='lalr')
    return _parser


@dataclass
class DotEdge:
    tail: str
    head: str
    attrs: Dict[str, str] = field(default_factory=dict)
    tail_port: Optional[str] = None
    head_port: Optional[str] = None


@dataclass
class DotCluster:
    name: str
    attrs: Dict[str, str] = field(default_factory=dict)
    nodes: List[str] = field(default_factory=list)
    parent: Optional[str] = None


@dataclass
class DotGraph:
    """
    What a DOT text declares. *nodes* maps each node statement's id to its
    attributes; edge endpoints are not added to it implicitly.
    """
    name: Optional[str] = None
    directed: bool = True
    attrs: Dict[str, str] = field(default_factory=dict)
    nodes: Dict[str, Dict[str, str]] = field(default_factory=dict)
    edges: List[DotEdge] = field(default_factory=list)
    clusters: Dict[str, DotCluster] = field(default_factory=dict)

    def edges_between(self, tail, head):
        return [edge for edge in self.edges
                if edge.tail == tail and edge.head == head]

    def cluster_of(self, node):
        for cluster in self.clusters.values():
            if node in cluster.nodes:
                return cluster.name
        return None


def _unquote(token):
    text = str(token)
    if token.type == 'STRING':
        return text[1:-1].replace('\\"', '"')
    return text


def _id(tree):
    return _unquote(tree.children[0])


def _attrs(tree):
    attrs = dict()
    if tree is None:
        return attrs
    for item in tree.children:
        if isinstance(item, Tree) and item.data == 'a_item':
            attrs[_id(item.children[0])] = _id(item.children[1])
    return attrs


def _node_id(tree):
    parts = [_id(child) for child in tree.children]
    return parts[0], (parts[1] if len(parts) > 1 else None)


class _Collector(object):

    def __init__(self):
        self.graph = DotGraph()

    def graph_tree(self, tree):
        children = list(tree.children)
        keywords = [c for c in children if isinstance(c, Token)]
        self.graph.directed = any(k.type == 'DIGRAPH' for k in keywords)
        for child in children:
            if isinstance(child, Tree) and child.data == 'id':
                self.graph.name = _id(child)
            elif isinstance(child, Tree) and child.data == 'stmt_list':
                self.statements(child, None, self.graph.attrs)
        return self.graph

    def statements(self, tree, cluster, attrs):
        for stmt in tree.children:
            if stmt.data == 'node_stmt':
                name, _ = _node_id(stmt.children[0])
                node_attrs = self.graph.nodes.setdefault(name, dict())
                node_attrs.update(_attrs(stmt.children[1]
                                         if len(stmt.children) > 1 else None))
                if cluster is not None and name not in cluster.nodes:
                    cluster.nodes.append(name)
            elif stmt.data == 'edge_stmt':
                self.edge(stmt)
            elif stmt.data == 'assignment':
                attrs[_id(stmt.children[0])] = _id(stmt.children[1])
            elif stmt.data == 'attr_stmt':
                if stmt.children[0].type == 'GRAPH':
                    attrs.update(_attrs(stmt.children[1]))
            elif stmt.data == 'subgraph':
                self.subgraph(stmt, cluster, attrs)

    def edge(self, stmt):
        ends = [c for c in stmt.children
                if isinstance(c, Tree) and c.data == 'node_id']
        attr_lists = [c for c in stmt.children
                      if isinstance(c, Tree) and c.data == 'attr_list']
        attrs = _attrs(attr_lists[0] if attr_lists else None)
        for tail_tree, head_tree in zip(ends, ends[1:]):
            tail, tail_port = _node_id(tail_tree)
            head, head_port = _node_id(head_tree)
            self.graph.edges.append(DotEdge(tail, head, dict(attrs),
                                            tail_port, head_port))

    def subgraph(self, stmt, parent, attrs):
        names = [c for c in stmt.children
                 if isinstance(c, Tree) and c.data == 'id']
        body = stmt.children[-1]
        name = _id(names[0]) if names else None
        if name is None or not name.startswith('cluster'):
            self.statements(body, parent, attrs)
            return
        cluster = DotCluster(name, parent=parent.name if parent else None)
        self.graph.clusters[name] = cluster
        self.statements(body, cluster, cluster.attrs)


def check_dot(text):
    """
    Parse DOT *text*.

    :rtype: DotGraph
    :raises DotSyntaxError: *text* is not in the supported DOT subset
    """
    try:
        tree = _get_parser().parse(text)
    except UnexpectedInput as error:
        raise DotSyntaxError('invalid DOT: {}'.format(
            str(error).splitlines()[0]), error.line, error.column)
    return _Collector().graph_tree(tree.children[0])
