# -*- encoding: utf8 -*-

"""
Declaration AST for DTD documents, and its canonical text form.

Every AST class is an immutable value: two ASTs parsed from texts that
differ only in layout compare equal, since source locations are excluded
from equality.
"""

import enum
from dataclasses import dataclass, field
from typing import Optional, Tuple


class TokenKind(enum.Enum):
    MARKUP_OPEN = 'markup-open'
    COMMENT = 'comment'
    PI = 'pi'
    NAME = 'name'
    LITERAL = 'literal'
    PUNCT = 'punct'


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    line: int
    column: int
    offset: int = 0

    def is_punct(self, char):
        return self.kind is TokenKind.PUNCT and self.lexeme == char

    @property
    def end(self):
        return self.offset + len(self.lexeme)


@dataclass(frozen=True)
class Location:
    line: int = 1
    column: int = 1

    def __str__(self):
        return '{}:{}'.format(self.line, self.column)


# ------------------------------------------------------------------------------
# content models


class Occurrence(enum.IntEnum):
    """
    Iteration marker; the integer order is the serialization order.
    """
    ONE = 0
    OPTIONAL = 1
    ZERO_OR_MORE = 2
    ONE_OR_MORE = 3

    @property
    def marker(self):
        return _MARKERS[self]

    @property
    def key(self):
        return _KEYS[self]

    @classmethod
    def from_marker(cls, marker):
        for occurrence, char in _MARKERS.items():
            if char == marker:
                return occurrence
        raise KeyError('unknown occurrence marker -- ' + marker)

    @classmethod
    def from_key(cls, key):
        for occurrence, name in _KEYS.items():
            if name == key:
                return occurrence
        raise KeyError('unknown occurrence -- ' + key)


_MARKERS = {Occurrence.ONE: '',
            Occurrence.OPTIONAL: '?',
            Occurrence.ZERO_OR_MORE: '*',
            Occurrence.ONE_OR_MORE: '+'}

_KEYS = {Occurrence.ONE: 'one',
         Occurrence.OPTIONAL: 'optional',
         Occurrence.ZERO_OR_MORE: 'zero_or_more',
         Occurrence.ONE_OR_MORE: 'one_or_more'}


class ModelKind(enum.Enum):
    EMPTY = 'empty'
    ANY = 'any'
    PCDATA = 'pcdata'
    NAME = 'name'
    SEQ = 'seq'
    ALT = 'alt'
    EXTERNAL = 'external'  # unresolved %entity; reference


@dataclass(frozen=True)
class ContentModel:
    """
    One node of a content-model expression tree.

    *name* is the element name for ``NAME`` and the entity name for
    ``EXTERNAL``; *children* is non-empty exactly for ``SEQ`` and ``ALT``.
    A parenthesized group with a single child is a ``SEQ`` of one.
    """
    kind: ModelKind
    name: Optional[str] = None
    children: Tuple['ContentModel', ...] = ()
    occurrence: Occurrence = Occurrence.ONE

    @property
    def is_group(self):
        return self.kind in (ModelKind.SEQ, ModelKind.ALT)

    def names(self):
        """
        Yield the element names referenced anywhere in this model.
        """
        if self.kind is ModelKind.NAME:
            yield self.name
        for child in self.children:
            for name in child.names():
                yield name

    def __str__(self):
        if self.kind is ModelKind.EMPTY:
            return 'EMPTY'
        if self.kind is ModelKind.ANY:
            return 'ANY'
        if self.kind is ModelKind.PCDATA:
            # only reachable for a whole (#PCDATA) body
            return '(#PCDATA)'
        if self.kind is ModelKind.NAME:
            return self.name + self.occurrence.marker
        if self.kind is ModelKind.EXTERNAL:
            return '%{};{}'.format(self.name, self.occurrence.marker)

        separator = ' | ' if self.kind is ModelKind.ALT else ', '
        parts = ['#PCDATA' if child.kind is ModelKind.PCDATA else str(child)
                 for child in self.children]
        return '({}){}'.format(separator.join(parts), self.occurrence.marker)


EMPTY = ContentModel(ModelKind.EMPTY)
ANY = ContentModel(ModelKind.ANY)
PCDATA = ContentModel(ModelKind.PCDATA)


def name(element_name, occurrence=Occurrence.ONE):
    return ContentModel(ModelKind.NAME, name=element_name,
                        occurrence=occurrence)


def seq(*children, **kwargs):
    return ContentModel(ModelKind.SEQ, children=tuple(children),
                        occurrence=kwargs.get('occurrence', Occurrence.ONE))


def alt(*children, **kwargs):
    return ContentModel(ModelKind.ALT, children=tuple(children),
                        occurrence=kwargs.get('occurrence', Occurrence.ONE))


def external(entity_name, occurrence=Occurrence.ONE):
    return ContentModel(ModelKind.EXTERNAL, name=entity_name,
                        occurrence=occurrence)


# ------------------------------------------------------------------------------
# attributes


class AttributeKind(enum.Enum):
    CDATA = 'CDATA'
    ID = 'ID'
    IDREF = 'IDREF'
    IDREFS = 'IDREFS'
    ENTITY = 'ENTITY'
    ENTITIES = 'ENTITIES'
    NMTOKEN = 'NMTOKEN'
    NMTOKENS = 'NMTOKENS'
    NOTATION = 'NOTATION'
    ENUMERATION = 'enumeration'


# drawn like CDATA in attribute blocks
GENERIC_KINDS = frozenset({AttributeKind.NMTOKEN, AttributeKind.NMTOKENS,
                           AttributeKind.NOTATION, AttributeKind.ENTITY,
                           AttributeKind.ENTITIES})

REFERENCE_KINDS = frozenset({AttributeKind.IDREF, AttributeKind.IDREFS})


class DefaultKind(enum.Enum):
    REQUIRED = '#REQUIRED'
    IMPLIED = '#IMPLIED'
    FIXED = '#FIXED'
    DEFAULT = 'default'


@dataclass(frozen=True)
class AttributeSpec:
    name: str
    kind: AttributeKind = AttributeKind.CDATA
    default: DefaultKind = DefaultKind.REQUIRED
    value: Optional[str] = None
    values: Tuple[str, ...] = ()  # Enumeration / Notation members

    def __str__(self):
        if self.kind is AttributeKind.ENUMERATION:
            type_text = '({})'.format('|'.join(self.values))
        elif self.kind is AttributeKind.NOTATION:
            type_text = 'NOTATION ({})'.format('|'.join(self.values))
        else:
            type_text = self.kind.value

        if self.default is DefaultKind.FIXED:
            default_text = '#FIXED ' + quote_literal(self.value)
        elif self.default is DefaultKind.DEFAULT:
            default_text = quote_literal(self.value)
        else:
            default_text = self.default.value

        return '{} {} {}'.format(self.name, type_text, default_text)


def quote_literal(text):
    if '"' in text:
        return "'{}'".format(text)
    return '"{}"'.format(text)


# ------------------------------------------------------------------------------
# declarations


@dataclass(frozen=True)
class ElementDecl:
    """
    ``<!ELEMENT name content>``. *source* keeps the declaration text when
    its content model still holds parameter-entity references.
    """
    name: str
    content: ContentModel
    location: Location = field(default=Location(), compare=False)
    source: Optional[str] = field(default=None, compare=False)

    def __str__(self):
        return '<!ELEMENT {} {}>'.format(self.name, self.content)


@dataclass(frozen=True)
class AttListDecl:
    element: str
    attributes: Tuple[AttributeSpec, ...] = ()
    location: Location = field(default=Location(), compare=False)

    def __str__(self):
        if not self.attributes:
            return '<!ATTLIST {}>'.format(self.element)
        return '<!ATTLIST {}\n{}>'.format(
            self.element,
            '\n'.join('    ' + str(spec) for spec in self.attributes))


@dataclass(frozen=True)
class ParamEntityDecl:
    """
    ``<!ENTITY % name ...>``; exactly one of *text* and *system_id* is set.
    """
    name: str
    text: Optional[str] = None
    system_id: Optional[str] = None
    public_id: Optional[str] = None
    location: Location = field(default=Location(), compare=False)

    @property
    def is_external(self):
        return self.system_id is not None

    def __str__(self):
        return '<!ENTITY % {} {}>'.format(
            self.name, _entity_value(self.text, self.system_id,
                                     self.public_id))


@dataclass(frozen=True)
class GeneralEntityDecl:
    name: str
    text: Optional[str] = None
    system_id: Optional[str] = None
    public_id: Optional[str] = None
    notation: Optional[str] = None
    location: Location = field(default=Location(), compare=False)

    def __str__(self):
        value = _entity_value(self.text, self.system_id, self.public_id)
        if self.notation:
            value += ' NDATA ' + self.notation
        return '<!ENTITY {} {}>'.format(self.name, value)


@dataclass(frozen=True)
class NotationDecl:
    name: str
    system_id: Optional[str] = None
    public_id: Optional[str] = None
    location: Location = field(default=Location(), compare=False)

    def __str__(self):
        if self.public_id is None:
            return '<!NOTATION {} SYSTEM {}>'.format(
                self.name, quote_literal(self.system_id))
        text = '<!NOTATION {} PUBLIC {}'.format(
            self.name, quote_literal(self.public_id))
        if self.system_id is not None:
            text += ' ' + quote_literal(self.system_id)
        return text + '>'


@dataclass(frozen=True)
class ParamEntityRef:
    """
    A ``%name;`` reference standing between declarations.
    """
    name: str
    location: Location = field(default=Location(), compare=False)

    def __str__(self):
        return '%{};'.format(self.name)


@dataclass(frozen=True)
class PendingDecl:
    """
    A declaration whose body uses parameter entities, kept as source text
    until :func:`dtdgraph.parser.expand_parameter_entities` runs.
    """
    keyword: str
    text: str
    location: Location = field(default=Location(), compare=False)

    def __str__(self):
        return self.text


def _entity_value(text, system_id, public_id):
    if system_id is None:
        return quote_literal(text)
    if public_id is None:
        return 'SYSTEM ' + quote_literal(system_id)
    return 'PUBLIC {} {}'.format(quote_literal(public_id),
                                 quote_literal(system_id))


@dataclass(frozen=True)
class DtdAst:
    declarations: Tuple[object, ...] = ()
    unresolved_entities: Tuple[Tuple[str, str], ...] = ()
    source: str = field(default='<string>', compare=False)
    digest: str = field(default='', compare=False)

    def elements(self):
        return [decl for decl in self.declarations
                if isinstance(decl, ElementDecl)]

    def attlists(self):
        return [decl for decl in self.declarations
                if isinstance(decl, AttListDecl)]

    @property
    def is_expanded(self):
        for decl in self.declarations:
            if isinstance(decl, (PendingDecl, ParamEntityRef)):
                return False
            if isinstance(decl, ElementDecl) and decl.source is not None:
                return False
        return True


def serialize_dtd(ast):
    """
    Return the canonical DTD text for *ast*: one declaration per line,
    comments and the XML declaration dropped.

    Parsing the result yields an AST equal to *ast*.
    """
    return ''.join(str(decl) + '\n' for decl in ast.declarations)
