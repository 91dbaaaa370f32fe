# -*- encoding: utf8 -*-

import os

import pytest
from hypothesis import given, settings, strategies as st

from dtdgraph import parse_dtd, expand_parameter_entities, read_dtd
from dtdgraph.datasets import amv as amv_path
from dtdgraph.dtd import (TokenKind, Occurrence, ModelKind, ContentModel,
                          AttributeKind, DefaultKind, AttributeSpec,
                          AttListDecl, ElementDecl, ParamEntityDecl,
                          serialize_dtd, name, seq, alt, external, PCDATA,
                          EMPTY, ANY)
from dtdgraph.errors import (UnterminatedComment, UnterminatedLiteral,
                             UnterminatedProcessingInstruction,
                             IllegalCharacter, DtdError, DtdSyntaxError,
                             MixedSeqAlt, UnbalancedParen, EmptyGroup,
                             TrailingTokens, InvalidAttributeDefault,
                             DuplicateElement, UndeclaredEntity,
                             RecursiveEntity)
from dtdgraph.parser import tokenize, parse_content_model

data_dir = os.path.join(os.path.dirname(__file__), 'data')

XHTML = 'http://www.w3.org/TR/xhtml1/DTD/xhtml1-strict.dtd'


def model(text):
    return parse_content_model(tokenize(text))


# ------------------------------------------------------------------------------
# tokenizer


def test_tokenize_element_declaration():
    tokens = tokenize('<!ELEMENT like EMPTY>')
    assert [(t.kind, t.lexeme) for t in tokens] == [
        (TokenKind.MARKUP_OPEN, '<!ELEMENT'),
        (TokenKind.NAME, 'like'),
        (TokenKind.NAME, 'EMPTY'),
        (TokenKind.PUNCT, '>'),
    ]


def test_tokenize_empty_text():
    assert tokenize('') == []
    assert tokenize('  \n\t ') == []


def test_tokenize_comment_and_xml_declaration():
    tokens = tokenize('<?xml version="1.0"?>\n<!-- Gestion des clients -->')
    assert [t.kind for t in tokens] == [TokenKind.PI, TokenKind.COMMENT]
    assert tokens[1].line == 2


def test_token_positions():
    text = '<!ELEMENT a\n  (b, c)>'
    tokens = tokenize(text)
    for token in tokens:
        assert text[token.offset:token.end] == token.lexeme
    paren = tokens[2]
    assert paren.lexeme == '('
    assert (paren.line, paren.column) == (2, 3)


def test_tokenize_accented_names():
    tokens = tokenize('prémium-universel liste-mots-clés')
    assert [t.lexeme for t in tokens] == ['prémium-universel',
                                          'liste-mots-clés']


@pytest.mark.parametrize('text, error, position', [
    ('<!-- never closed', UnterminatedComment, (1, 1)),
    ('<!ENTITY % x "abc>', UnterminatedLiteral, (1, 14)),
    ('<?xml version="1.0"', UnterminatedProcessingInstruction, (1, 1)),
    ('<!ELEMENT a EMPTY>\n  @', IllegalCharacter, (2, 3)),
    ('<!DOCTYPE a []>', IllegalCharacter, (1, 1)),
])
def test_tokenize_errors(text, error, position):
    with pytest.raises(error) as info:
        tokenize(text)
    assert (info.value.line, info.value.column) == position


# ------------------------------------------------------------------------------
# content models


@pytest.mark.parametrize('text, expected', [
    ('EMPTY', EMPTY),
    ('ANY', ANY),
    ('(#PCDATA)', PCDATA),
    ('(#PCDATA)*', alt(PCDATA, occurrence=Occurrence.ZERO_OR_MORE)),
    ('(#PCDATA | em | strong)*',
     alt(PCDATA, name('em'), name('strong'),
         occurrence=Occurrence.ZERO_OR_MORE)),
    ('(liste-types-client, liste-films, liste-artistes)',
     seq(name('liste-types-client'), name('liste-films'),
         name('liste-artistes'))),
    ('(joue | réalise | compose)+',
     alt(name('joue'), name('réalise'), name('compose'),
         occurrence=Occurrence.ONE_OR_MORE)),
    ('((gratuit | prémium-standard | prémium-universel), liste-mots-clés?)',
     seq(alt(name('gratuit'), name('prémium-standard'),
             name('prémium-universel')),
         name('liste-mots-clés', Occurrence.OPTIONAL))),
    ('(client)*', seq(name('client'), occurrence=Occurrence.ZERO_OR_MORE)),
    ('(ami*)', seq(name('ami', Occurrence.ZERO_OR_MORE))),
    ('(a)', seq(name('a'))),
    ('(%body;)', seq(external('body'))),
])
def test_parse_content_model(text, expected):
    assert model(text) == expected


def test_occurrence_binds_to_preceding_particle():
    parsed = model('((a, b)*, c+)')
    inner, last = parsed.children
    assert parsed.occurrence is Occurrence.ONE
    assert inner.occurrence is Occurrence.ZERO_OR_MORE
    assert [c.occurrence for c in inner.children] == [Occurrence.ONE] * 2
    assert last.occurrence is Occurrence.ONE_OR_MORE


def test_names_in_order():
    parsed = model('(a, (b | c)*, a?)')
    assert list(parsed.names()) == ['a', 'b', 'c', 'a']


def test_decomposed_names():
    # résumé written with combining acute accents
    decomposed = 're\u0301sume\u0301'
    ast = parse_dtd('<!ELEMENT {0} (#PCDATA)>\n'
                    '<!ATTLIST {0} a\u203fb CDATA #IMPLIED>'.format(
                        decomposed))
    decl, attlist = ast.declarations
    assert decl.name == decomposed
    assert attlist.element == decomposed
    assert attlist.attributes[0].name == 'a\u203fb'
    assert [t.lexeme for t in tokenize(decomposed)] == [decomposed]


def amv_text():
    with open(amv_path, encoding='utf8') as f:
        return f.read()


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_error_positions_lie_in_the_text(data):
    amv = amv_text()
    start = data.draw(st.integers(0, len(amv)))
    end = data.draw(st.integers(start, min(len(amv), start + 40)))
    junk = data.draw(st.text(alphabet='<>!()|,*+?%;#"\'-\n ELMNTaé\u0301',
                             max_size=10))
    text = amv[:start] + junk + amv[end:]
    try:
        parse_dtd(text)
    except DtdError as error:
        lines = text.split('\n')
        assert 1 <= error.line <= len(lines)
        assert 1 <= error.column <= len(lines[error.line - 1]) + 1


@pytest.mark.parametrize('text, error', [
    ('(a, b | c)', MixedSeqAlt),
    ('(a | b, c)', MixedSeqAlt),
    ('(a, b', UnbalancedParen),
    ('(a))', UnbalancedParen),
    ('()', EmptyGroup),
    ('(a) b', TrailingTokens),
    ('(#PCDATA | a)', DtdSyntaxError),
    ('(#PCDATA, a)*', MixedSeqAlt),
    ('(a, #PCDATA)', DtdSyntaxError),
    ('(a,)', DtdSyntaxError),
    ('', DtdSyntaxError),
])
def test_content_model_errors(text, error):
    with pytest.raises(error) as info:
        model(text)
    assert info.value.line >= 1
    assert info.value.column >= 1


def test_empty_group_position():
    with pytest.raises(EmptyGroup) as info:
        parse_dtd('<!ELEMENT a\n    ()>')
    assert (info.value.line, info.value.column) == (2, 5)


# ------------------------------------------------------------------------------
# declarations


def test_parse_attlist():
    ast = parse_dtd('<!ATTLIST like\n'
                    '    client IDREF #REQUIRED\n'
                    "    stars (0|1|2|3|4|5) '0'\n"
                    '    note CDATA #IMPLIED\n'
                    '    lang NMTOKEN #FIXED "fr">')
    attlist, = ast.attlists()
    assert attlist == AttListDecl('like', (
        AttributeSpec('client', AttributeKind.IDREF),
        AttributeSpec('stars', AttributeKind.ENUMERATION,
                      DefaultKind.DEFAULT, '0',
                      ('0', '1', '2', '3', '4', '5')),
        AttributeSpec('note', AttributeKind.CDATA, DefaultKind.IMPLIED),
        AttributeSpec('lang', AttributeKind.NMTOKEN, DefaultKind.FIXED,
                      'fr'),
    ))


def test_invalid_attribute_default():
    with pytest.raises(InvalidAttributeDefault) as info:
        parse_dtd("<!ATTLIST like stars (0|1|2) '7'>")
    assert info.value.column == 30


def test_unknown_attribute_type():
    with pytest.raises(DtdSyntaxError):
        parse_dtd('<!ATTLIST like stars INTEGER #REQUIRED>')


def test_duplicate_element():
    with pytest.raises(DuplicateElement) as info:
        parse_dtd('<!ELEMENT a EMPTY>\n<!ELEMENT a ANY>')
    assert info.value.name == 'a'
    assert info.value.line == 2


def test_unclosed_declaration():
    with pytest.raises(DtdSyntaxError):
        parse_dtd('<!ELEMENT a EMPTY\n<!ELEMENT b EMPTY>')


def test_locations_are_recorded():
    ast = parse_dtd('\n\n  <!ELEMENT a EMPTY>')
    decl, = ast.elements()
    assert (decl.location.line, decl.location.column) == (3, 3)


def test_layout_does_not_matter():
    compact = parse_dtd('<!ELEMENT a (b,c)><!ELEMENT b EMPTY>'
                        '<!ELEMENT c EMPTY>')
    spread = parse_dtd('<!-- x -->\n<!ELEMENT a ( b ,\n c )>\n\n'
                       '<!ELEMENT b EMPTY >\n<!ELEMENT c  EMPTY>')
    assert compact == spread


def test_amv_declarations():
    ast = read_dtd(amv_path)
    assert len(ast.elements()) == 25
    assert len(ast.attlists()) == 11
    assert sum(len(a.attributes) for a in ast.attlists()) == 28
    assert ast.is_expanded


def test_amv_external_body():
    ast = read_dtd(amv_path)
    assert ast.unresolved_entities == (('xhtml-body', XHTML),
                                       ('body', XHTML))
    contents = {decl.name: decl.content for decl in ast.elements()}
    assert contents['résumé'] == seq(external('body'))
    assert contents['biographie'] == seq(external('body'))


def test_amv_digest_and_source():
    ast = read_dtd(amv_path)
    assert ast.source == amv_path
    assert len(ast.digest) == 64


# ------------------------------------------------------------------------------
# parameter entities


def test_expand_internal_entity():
    ast = parse_dtd('<!ENTITY % trio "a, b, c">\n'
                    '<!ELEMENT x (%trio;)>')
    assert not ast.is_expanded
    expanded = expand_parameter_entities(ast)
    assert expanded.is_expanded
    decl, = expanded.elements()
    assert decl.content == seq(name('a'), name('b'), name('c'))
    assert decl.location.line == 2


def test_expand_entities_file():
    with open(os.path.join(data_dir, 'ext.dtd'), encoding='utf8') as f:
        resolver = {'ext.dtd': f.read()}
    ast = read_dtd(os.path.join(data_dir, 'entities.dtd'), resolver=resolver)

    assert [d.name for d in ast.elements()] == ['address', 'person', 'first',
                                                'last']
    contents = {decl.name: decl.content for decl in ast.elements()}
    assert contents['person'] == seq(name('first'), name('last'),
                                     name('address', Occurrence.OPTIONAL))
    attlist, = ast.attlists()
    assert [a.name for a in attlist.attributes] == ['id', 'nick']
    assert attlist.attributes[0].kind is AttributeKind.ID
    assert ast.unresolved_entities == ()


def test_unread_external_entity_is_recorded():
    ast = read_dtd(os.path.join(data_dir, 'entities.dtd'))
    assert ast.unresolved_entities == (('ext', 'ext.dtd'),)
    assert 'address' not in [d.name for d in ast.elements()]


def test_references_after_unread_import():
    ast = expand_parameter_entities(parse_dtd(
        '<!ENTITY % lib SYSTEM "lib.dtd">\n%lib;\n'
        '<!ELEMENT doc (head, %inline;*)>'))
    decl, = ast.elements()
    assert decl.content == seq(name('head'),
                               external('inline', Occurrence.ZERO_OR_MORE))
    assert ast.unresolved_entities == (('lib', 'lib.dtd'),
                                       ('inline', 'lib.dtd'))


def test_undeclared_entity():
    with pytest.raises(UndeclaredEntity) as info:
        expand_parameter_entities(parse_dtd('<!ELEMENT x (%nope;)>'))
    assert info.value.name == 'nope'
    assert info.value.line == 1


def test_recursive_entity():
    ast = parse_dtd('<!ENTITY % a "%a;">\n<!ELEMENT x (%a;)>')
    with pytest.raises(RecursiveEntity) as info:
        expand_parameter_entities(ast)
    assert info.value.path == ('a', 'a')
    assert info.value.line == 2


def test_indirect_recursion():
    ast = parse_dtd('<!ENTITY % a "x, %b;">'
                    '<!ENTITY % b "y, %a;">'
                    '<!ELEMENT r (%a;)>')
    with pytest.raises(RecursiveEntity) as info:
        expand_parameter_entities(ast)
    assert info.value.path == ('a', 'b', 'a')


def test_first_entity_declaration_wins():
    ast = expand_parameter_entities(parse_dtd(
        '<!ENTITY % p "a">'
        '<!ENTITY % p "b">'
        '<!ELEMENT r (%p;)>'))
    decl, = ast.elements()
    assert decl.content == seq(name('a'))


def test_error_in_expanded_text_is_relocated():
    ast = parse_dtd('<!ENTITY % bad "a, b | c">\n\n<!ELEMENT r (%bad;)>')
    with pytest.raises(MixedSeqAlt) as info:
        expand_parameter_entities(ast)
    assert (info.value.line, info.value.column) == (3, 1)


# ------------------------------------------------------------------------------
# canonical text


def test_serialize_amv():
    ast = read_dtd(amv_path)
    text = serialize_dtd(ast)
    assert parse_dtd(text).declarations == ast.declarations


def test_serialize_entity_declarations():
    ast = parse_dtd('<!ENTITY % ext PUBLIC "-//X//EN" "x.dtd">'
                    '<!ENTITY copy "&#169;">'
                    '<!NOTATION gif SYSTEM "image/gif">')
    assert isinstance(ast.declarations[0], ParamEntityDecl)
    assert parse_dtd(serialize_dtd(ast)) == ast


NAMES = ['a', 'b', 'c', 'liste-films', 'prémium-standard', 'x.y', 'mot-clé']

occurrences = st.sampled_from(list(Occurrence))

particles = st.builds(name, st.sampled_from(NAMES), occurrences)


def _group(kind, children, occurrence):
    if len(children) == 1:
        kind = ModelKind.SEQ  # (x) always reads back as a sequence
    return ContentModel(kind, children=tuple(children), occurrence=occurrence)


def groups(children):
    return st.builds(_group, st.sampled_from([ModelKind.SEQ, ModelKind.ALT]),
                     st.lists(children, min_size=1, max_size=5), occurrences)


def _depth(m):
    return 1 + max((_depth(child) for child in m.children), default=0)


content_models = groups(st.recursive(particles, groups, max_leaves=25)).filter(
    lambda m: _depth(m) <= 6)


@settings(max_examples=1000, deadline=None)
@given(content_models)
def test_print_parse_fixpoint(content):
    text = str(content)
    parsed = model(text)
    assert parsed == content
    assert str(parsed) == text


@settings(max_examples=200, deadline=None)
@given(content_models)
def test_element_declaration_round_trip(content):
    decl = ElementDecl('root', content)
    ast = parse_dtd(str(decl))
    assert ast.elements() == [decl]
