# -*- encoding: utf8 -*-

import io

import pytest

from dtdgraph.util import (Diagnostic, ERROR, WARNING, INFO, has_errors,
                           double_sorted, sort_diagnostics, use_color,
                           split_pair, GLYPHS, GLYPH_MEANINGS, STYLE)
from dtdgraph.dtd import Occurrence


def test_diagnostic_format():
    located = Diagnostic('UndeclaredChildElement', 'element b is never '
                         'declared', WARNING, ('cloud/b/undeclared',), (3, 1))
    assert located.format('amv.dtd') == \
        'amv.dtd:3:1: warning: UndeclaredChildElement: element b is never ' \
        'declared'
    floating = Diagnostic('DanglingEdge', 'edge 0 dangles')
    assert floating.format('g.json') == 'g.json: error: DanglingEdge: ' \
                                        'edge 0 dangles'
    assert floating.format() == 'error: DanglingEdge: edge 0 dangles'


def test_diagnostic_color():
    line = Diagnostic('X', 'y', INFO).format('f', color=True)
    assert line == 'f: \033[36minfo\033[0m: X: y'


def test_has_errors():
    assert not has_errors([])
    assert not has_errors([Diagnostic('A', 'a', WARNING),
                           Diagnostic('B', 'b', INFO)])
    assert has_errors([Diagnostic('A', 'a', WARNING),
                       Diagnostic('C', 'c', ERROR)])


def test_double_sorted():
    items = [('b', 2), ('a', 3), ('b', 1), ('a', 1)]
    assert double_sorted(items, key=lambda x: x[0],
                         subkey=lambda x: x[1]) == [('a', 1), ('a', 3),
                                                    ('b', 1), ('b', 2)]
    assert double_sorted(items, key=lambda x: x[0], reverse=True,
                         subkey=lambda x: x[1], subreverse=True) == [
        ('b', 2), ('b', 1), ('a', 3), ('a', 1)]


def test_sort_diagnostics():
    late = Diagnostic('Z', 'late', WARNING, location=(9, 1))
    early_b = Diagnostic('B', 'early', INFO, location=(2, 5))
    early_a = Diagnostic('A', 'early', WARNING, location=(2, 5))
    floating = Diagnostic('A', 'anywhere', INFO)
    assert sort_diagnostics([floating, late, early_b, early_a]) == [
        early_a, early_b, late, floating]


def test_use_color():
    stream = io.StringIO()
    assert use_color(stream, {'DTDGRAPH_COLOR': 'always'})
    assert not use_color(stream, {'DTDGRAPH_COLOR': 'never'})
    assert not use_color(stream, {})


def test_split_pair():
    assert split_pair('a=b') == ('a', 'b')
    assert split_pair('x.dtd=dir/x=1.dtd') == ('x.dtd', 'dir/x=1.dtd')
    assert split_pair('hint=') == ('hint', '')
    with pytest.raises(ValueError):
        split_pair('novalue', 'text hint')
    with pytest.raises(ValueError):
        split_pair('=value')


def test_glyph_tables_cover_occurrences():
    keys = {occurrence.key for occurrence in Occurrence}
    assert set(GLYPHS) == keys
    assert set(GLYPH_MEANINGS) == keys
    assert len(set(GLYPHS.values())) == len(GLYPHS)
    assert STYLE['rankdir'] == 'TB'
