# -*- encoding: utf8 -*-

import json

import pytest

from dtdgraph import read_dtd, build_graph, BuildOptions, read_annotations
from dtdgraph.datasets import amv as amv_path, amv_links
from dtdgraph.dtd import AttributeKind, Occurrence
from dtdgraph.graph import (SchemaGraph, ElementNode, TextLeaf,
                            AttributeBlock, AttributeRow, GroupNode,
                            CloudNode, GroupKind, CloudReason, NodeKind,
                            EdgeKind, Provenance, containment, attachment,
                            reflink, validate_graph, to_json, to_dict,
                            from_json, schema_errors, containment_graph,
                            element_id, attributes_id, group_id, cloud_id)


def amv_graph():
    with open(amv_links, encoding='utf8') as f:
        annotations = read_annotations(f.read())
    return build_graph(read_dtd(amv_path), BuildOptions(tuple(annotations)))


def codes(g):
    return sorted(d.code for d in validate_graph(g))


def small_graph(*extra_edges, **kwargs):
    """
    a -> (b, c) with a reference from b to c.
    """
    nodes = [ElementNode('element/a', 'a'),
             ElementNode('element/b', 'b'),
             ElementNode('element/c', 'c'),
             GroupNode('group/a/0', 'a', GroupKind.SEQ),
             AttributeBlock('attributes/b', 'b', (
                 AttributeRow('to', '#to', AttributeKind.IDREF),)),
             AttributeBlock('attributes/c', 'c', (
                 AttributeRow('key', 'key', AttributeKind.ID, underline=True),
                 AttributeRow('note', 'note'))),
             ] + list(kwargs.get('extra_nodes', ()))
    edges = [containment('element/a', 'group/a/0'),
             containment('group/a/0', 'element/b', seq_index=1),
             containment('group/a/0', 'element/c', seq_index=2),
             attachment('element/b', 'attributes/b'),
             attachment('element/c', 'attributes/c'),
             ] + list(extra_edges)
    return SchemaGraph.of(nodes, edges, kwargs.get('root', 'element/a'))


def test_node_ids():
    assert element_id('client') == 'element/client'
    assert attributes_id('client') == 'attributes/client'
    assert group_id('client', '0.1') == 'group/client/0.1'
    assert cloud_id('résumé', '0.1') == 'cloud/résumé/0.1'


def test_small_graph_is_valid():
    assert validate_graph(small_graph()) == []


def test_valid_reflink():
    g = small_graph(reflink('attributes/b', 'to', 'attributes/c', 'key'))
    assert validate_graph(g) == []


def test_reflink_target_not_id():
    g = small_graph(reflink('attributes/b', 'to', 'attributes/c', 'note'))
    assert codes(g) == ['RefLinkTargetNotId']


def test_reflink_source_not_idref():
    g = small_graph(reflink('attributes/c', 'note', 'attributes/c', 'key'))
    assert codes(g) == ['RefLinkSourceNotIdRef']


def test_reflink_unknown_row():
    g = small_graph(reflink('attributes/b', 'nope', 'attributes/c', 'key'))
    assert codes(g) == ['UnknownAttributeRow']


def test_reflink_between_elements():
    g = small_graph(reflink('element/b', 'to', 'element/c', 'key'))
    assert codes(g) == ['InvalidContainment']


def test_dangling_edge():
    g = small_graph(containment('element/c', 'element/ghost'))
    assert codes(g) == ['DanglingEdge']


def test_non_consecutive_seq_index():
    nodes = [ElementNode('element/a', 'a'), ElementNode('element/b', 'b'),
             GroupNode('group/a/0', 'a', GroupKind.SEQ)]
    edges = [containment('element/a', 'group/a/0'),
             containment('group/a/0', 'element/b', seq_index=1),
             containment('group/a/0', 'element/b', seq_index=3)]
    g = SchemaGraph.of(nodes, edges)
    assert codes(g) == ['NonConsecutiveSeqIndex']


def test_missing_and_unexpected_seq_index():
    nodes = [ElementNode('element/a', 'a'), ElementNode('element/b', 'b'),
             GroupNode('group/a/0', 'a', GroupKind.SEQ),
             GroupNode('group/a/0.2', 'a', GroupKind.ALT, subgroup=True)]
    edges = [containment('element/a', 'group/a/0'),
             containment('group/a/0', 'element/b'),
             containment('group/a/0', 'group/a/0.2', seq_index=2),
             containment('group/a/0.2', 'element/b', seq_index=1)]
    assert codes(SchemaGraph.of(nodes, edges)) == [
        'MissingSeqIndex', 'NonConsecutiveSeqIndex', 'UnexpectedSeqIndex']


def test_empty_group():
    nodes = [ElementNode('element/a', 'a'),
             GroupNode('group/a/0', 'a', GroupKind.ALT)]
    g = SchemaGraph.of(nodes, [containment('element/a', 'group/a/0')])
    assert codes(g) == ['EmptyGroup']


def test_group_cycle():
    nodes = [ElementNode('element/a', 'a'),
             GroupNode('group/a/0', 'a', GroupKind.ALT),
             GroupNode('group/a/0.1', 'a', GroupKind.ALT, subgroup=True)]
    edges = [containment('element/a', 'group/a/0'),
             containment('group/a/0', 'group/a/0.1'),
             containment('group/a/0.1', 'group/a/0')]
    assert codes(SchemaGraph.of(nodes, edges)) == ['GroupCycle']


def test_recursive_elements_are_not_a_group_cycle():
    nodes = [ElementNode('element/a', 'a')]
    edges = [containment('element/a', 'element/a', Occurrence.OPTIONAL)]
    assert validate_graph(SchemaGraph.of(nodes, edges)) == []


def test_containment_from_text_leaf():
    g = small_graph(containment('text/b', 'element/c'),
                    extra_nodes=[TextLeaf('text/b', 'b')])
    assert codes(g) == ['InvalidContainment']


def test_attribute_block_problems():
    orphan = AttributeBlock('attributes/z', 'z')
    g = small_graph(extra_nodes=[orphan])
    assert codes(g) == ['AttributeBlockOwner', 'MissingAttributeAttachment']

    g = small_graph(attachment('element/b', 'attributes/b'))
    assert codes(g) == ['DuplicateAttributeAttachment']

    g = small_graph(attachment('element/a', 'attributes/b'))
    assert codes(g) == ['AttributeBlockOwner']


def test_duplicate_element_node():
    g = small_graph(extra_nodes=[ElementNode('element/a2', 'a', True)])
    assert codes(g) == ['DuplicateElementNode']


def test_unreachable_element():
    g = small_graph(extra_nodes=[ElementNode('element/d', 'd')])
    assert codes(g) == ['UnreachableElement']
    assert validate_graph(g)[0].subjects == ('element/d',)

    g = small_graph(extra_nodes=[ElementNode('element/d', 'd', True)])
    assert validate_graph(g) == []
    g = small_graph(extra_nodes=[ElementNode('element/d', 'd')], root=None)
    assert validate_graph(g) == []


def test_invalid_root():
    assert codes(small_graph(root='group/a/0')) == ['InvalidRoot']
    assert codes(small_graph(root='element/nowhere')) == ['InvalidRoot']
    assert validate_graph(small_graph(root=None)) == []


def test_diagnostics_are_errors():
    g = small_graph(containment('element/c', 'element/ghost'))
    assert all(d.severity == 'error' for d in validate_graph(g))


def test_queries():
    g = small_graph()
    assert g.element('b').name == 'b'
    assert g.element('ghost') is None
    assert g.attribute_block('c').port('note') == 'r1'
    assert g.attribute_block('a') is None
    assert [n.id for n in g.nodes_of(NodeKind.GROUP)] == ['group/a/0']
    assert len(g.out_edges('group/a/0')) == 2
    assert len(g.edges_of(EdgeKind.ATTRIBUTE)) == 2
    assert [n.id for n in g.sorted_nodes()] == sorted(g.nodes)


def test_containment_graph():
    digraph = containment_graph(small_graph())
    assert set(digraph.nodes) == set(small_graph().nodes)
    assert digraph.has_edge('group/a/0', 'element/c')
    assert not digraph.has_edge('element/b', 'attributes/b')


# ------------------------------------------------------------------------------
# canonical JSON


def test_empty_graph_json():
    assert to_json(SchemaGraph()) == (
        '{"edges":[],"format":1,"nodes":[],'
        '"provenance":{"digest":"","source":""},"root":null}')


def test_json_keeps_unicode():
    text = to_json(amv_graph())
    assert 'prémium-universel' in text
    assert '\\u' not in text
    assert not text.endswith('\n')


def test_json_is_deterministic():
    assert to_json(amv_graph()) == to_json(amv_graph())


def test_json_round_trip():
    g = amv_graph()
    again = from_json(to_json(g))
    assert again == g
    assert to_json(again) == to_json(g)


def test_json_node_order():
    data = to_dict(amv_graph())
    ids = [node['id'] for node in data['nodes']]
    assert ids == sorted(ids)


def test_json_edge_fields():
    data = to_dict(small_graph(
        reflink('attributes/b', 'to', 'attributes/c', 'key')))
    assert data['edges'][1] == {'from': 'group/a/0', 'to': 'element/b',
                                'kind': 'containment', 'occurrence': 'one',
                                'seq_index': 1}
    assert data['edges'][3] == {'from': 'element/b', 'to': 'attributes/b',
                                'kind': 'attribute'}
    assert data['edges'][5] == {'from': 'attributes/b', 'to': 'attributes/c',
                                'kind': 'reflink', 'from_attribute': 'to',
                                'to_attribute': 'key'}


def test_from_json_rejects_other_formats():
    with pytest.raises(ValueError):
        from_json('{"format": 2, "nodes": [], "edges": []}')
    with pytest.raises(ValueError):
        from_json('[]')
    with pytest.raises(ValueError):
        from_json('{"format": 1, "nodes": []}')
    with pytest.raises(ValueError):
        from_json('not json')


def test_provenance():
    g = amv_graph()
    assert g.provenance == Provenance(amv_path, read_dtd(amv_path).digest)


def test_schema_accepts_built_graphs():
    assert schema_errors(json.loads(to_json(amv_graph()))) == []
    assert schema_errors(json.loads(to_json(SchemaGraph()))) == []


def test_schema_rejects_unknown_fields():
    data = json.loads(to_json(small_graph()))
    data['nodes'][0]['colour'] = 'green'
    data['format'] = 7
    diagnostics = schema_errors(data)
    assert len(diagnostics) == 2
    assert all(d.code == 'SchemaViolation' for d in diagnostics)
    assert diagnostics[0].message.startswith('format: ')
    assert diagnostics[1].message.startswith('nodes/0: ')


def test_cloud_owner_may_be_null():
    cloud = CloudNode('cloud/x/undeclared', 'x', CloudReason.UNDECLARED)
    assert cloud.to_dict()['owner'] is None
    data = json.loads(to_json(SchemaGraph.of([cloud])))
    assert schema_errors(data) == []
