"""Wikidata statement extraction and textualization.

One SPARQL query pulls every statement of an entity, with labels,
qualifiers, units, and ranks. Result rows are grouped into statements,
rendered as "ItemLabel: PropertyLabel: value (qualifier, ...)" lines, and
keyed by a SHA-256 hash of the (QID, PID) pair so all values of a property
form one retrievable group.
"""

from __future__ import annotations

import hashlib
import logging
import re
import time
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from string import Template

import requests

from .corpus import ContentHash
from .errors import TransportError

logger = logging.getLogger(__name__)

QID_PATTERN = re.compile(r"^Q\d+$")
PID_PATTERN = re.compile(r"^P\d+$")
_LANGUAGE_PATTERN = re.compile(r"^[A-Za-z0-9-]{2,16}$")

# Wikidata time precision codes.
PRECISION_YEAR = 9
PRECISION_MONTH = 10
PRECISION_DAY = 11

_MONTHS = (
    "January", "February", "March", "April", "May", "June",
    "July", "August", "September", "October", "November", "December",
)

_TIME_FORMAT = re.compile(r"^([+-]?)(\d{1,6})-(\d{2})-(\d{2})T")

START_TIME_PID = "P580"
END_TIME_PID = "P582"

_XSD_NUMERIC = {
    "http://www.w3.org/2001/XMLSchema#decimal",
    "http://www.w3.org/2001/XMLSchema#double",
    "http://www.w3.org/2001/XMLSchema#float",
    "http://www.w3.org/2001/XMLSchema#integer",
    "http://www.w3.org/2001/XMLSchema#int",
}
_XSD_DATETIME = "http://www.w3.org/2001/XMLSchema#dateTime"
_WKT_LITERAL = "http://www.opengis.net/ont/geosparql#wktLiteral"


class Rank(Enum):
    PREFERRED = "Preferred"
    NORMAL = "Normal"
    DEPRECATED = "Deprecated"


class ValueKind(Enum):
    ENTITY = "entity"
    TIME = "time"
    QUANTITY = "quantity"
    TEXT = "text"
    MEDIA = "media-file"
    COORDINATE = "coordinate"


@dataclass(frozen=True)
class TypedValue:
    kind: ValueKind
    raw: str
    precision: int | None = None  # time values only


@dataclass(frozen=True)
class Qualifier:
    pid: str
    label: str
    value: TypedValue
    value_label: str


@dataclass(frozen=True)
class StatementRecord:
    """One grouped statement: property, value, qualifiers, rank."""

    qid: str
    item_label: str
    pid: str
    property_label: str
    value: TypedValue
    value_label: str
    qualifiers: tuple[Qualifier, ...] = ()
    unit_label: str | None = None
    rank: Rank = Rank.NORMAL
    value_image: str | None = None  # image attached to the value entity

    def __post_init__(self):
        if not QID_PATTERN.match(self.qid):
            raise ValueError(f"not a QID: {self.qid!r}")
        if not PID_PATTERN.match(self.pid):
            raise ValueError(f"not a PID: {self.pid!r}")


@dataclass(frozen=True)
class TextTriple:
    """One statement rendered as text, keyed by its (QID, PID) hash."""

    qid: str
    pid: str
    text: str
    triple_key: ContentHash
    media_url: str | None = None


@dataclass(frozen=True)
class TripleGroup:
    """All rendered statements of one property on one item."""

    qid: str
    pid: str
    triple_key: ContentHash
    triples: tuple[TextTriple, ...]

    @property
    def text(self) -> str:
        return "\n".join(t.text for t in self.triples)

    @property
    def media_url(self) -> str | None:
        for triple in self.triples:
            if triple.media_url:
                return triple.media_url
        return None


def triple_key(qid: str, pid: str) -> ContentHash:
    """SHA-256 over "qid|pid"; shared by all statements of the property."""
    if not QID_PATTERN.match(qid):
        raise ValueError(f"not a QID: {qid!r}")
    if not PID_PATTERN.match(pid):
        raise ValueError(f"not a PID: {pid!r}")
    return ContentHash(hashlib.sha256(f"{qid}|{pid}".encode("utf-8")).digest())


def render_sparql(qid: str, language: str = "en") -> str:
    """The statement-listing query with the item and language filled in."""
    if not QID_PATTERN.match(qid):
        raise ValueError(f"not a QID: {qid!r}")
    if not _LANGUAGE_PATTERN.match(language):
        raise ValueError(f"not a language code: {language!r}")
    template = (resources.files("q2q") / "sparql" / "qitem.rq").read_text(encoding="utf-8")
    return Template(template).substitute(qid=qid, language=language)


def format_time_value(timestamp: str, precision: int) -> str:
    """Render a Wikidata timestamp at day/month/year precision.

    Day precision gives "15 August 1947", month "August 1947", year "1947".
    Unknown precisions fall back to the year rendering.
    """
    match = _TIME_FORMAT.match(timestamp)
    if not match:
        raise ValueError(f"unrecognized timestamp: {timestamp!r}")
    sign, year_text, month_text, day_text = match.groups()
    year = int(year_text)
    era = " BCE" if sign == "-" else ""
    if precision >= PRECISION_MONTH:
        month_index = int(month_text)
        if not 1 <= month_index <= 12:
            raise ValueError(f"timestamp month out of range: {timestamp!r}")
        if precision >= PRECISION_DAY:
            return f"{int(day_text)} {_MONTHS[month_index - 1]} {year}{era}"
        return f"{_MONTHS[month_index - 1]} {year}{era}"
    return f"{year}{era}"


def _render_value(value: TypedValue, value_label: str, unit_label: str | None) -> str:
    if value.kind is ValueKind.TIME:
        precision = value.precision if value.precision is not None else _infer_precision(value.raw)
        return format_time_value(value.raw, precision)
    if value.kind is ValueKind.MEDIA:
        return value.raw
    text = value_label or value.raw
    if value.kind is ValueKind.QUANTITY and unit_label and unit_label != "1":
        return f"{text} {unit_label}"
    return text


def _infer_precision(timestamp: str) -> int:
    # The listing query returns bare timestamps without their precision
    # field; midnight January 1st is overwhelmingly a year-precision value.
    match = _TIME_FORMAT.match(timestamp)
    if match and match.group(3) == "01" and match.group(4) == "01":
        return PRECISION_YEAR
    return PRECISION_DAY


def textualize(record: StatementRecord) -> TextTriple:
    """Render one statement as "ItemLabel: PropertyLabel: value".

    Qualifiers append as " (label: value, ...)"; a start-time qualifier
    with no end time renders as a "START-current" span instead. Deprecated
    statements must be filtered out before this point.
    """
    if record.rank is Rank.DEPRECATED:
        raise ValueError("deprecated statements are never textualized")

    value_text = _render_value(record.value, record.value_label, record.unit_label)

    has_end = any(q.pid == END_TIME_PID for q in record.qualifiers)
    parts: list[str] = []
    for qualifier in record.qualifiers:
        rendered = _render_value(qualifier.value, qualifier.value_label, None)
        if qualifier.pid == START_TIME_PID and not has_end:
            parts.append(f"{rendered}-current")
        else:
            parts.append(f"{qualifier.label}: {rendered}")

    text = f"{record.item_label}: {record.property_label}: {value_text}"
    if parts:
        text += f" ({', '.join(parts)})"

    media_url = record.value.raw if record.value.kind is ValueKind.MEDIA else record.value_image
    return TextTriple(
        qid=record.qid,
        pid=record.pid,
        text=text,
        triple_key=triple_key(record.qid, record.pid),
        media_url=media_url,
    )


def group_statements(records) -> tuple[list[TripleGroup], int]:
    """Group statements by (QID, PID) and render each into a TextTriple.

    Deprecated statements are dropped (the count is returned); Preferred
    statements come before Normal ones within a group.
    """
    skipped = 0
    grouped: dict[tuple[str, str], list[StatementRecord]] = {}
    for record in records:
        if record.rank is Rank.DEPRECATED:
            skipped += 1
            continue
        grouped.setdefault((record.qid, record.pid), []).append(record)

    groups: list[TripleGroup] = []
    for (qid, pid), members in grouped.items():
        ordered = sorted(members, key=lambda r: 0 if r.rank is Rank.PREFERRED else 1)
        groups.append(
            TripleGroup(
                qid=qid,
                pid=pid,
                triple_key=triple_key(qid, pid),
                triples=tuple(textualize(r) for r in ordered),
            )
        )
    return groups, skipped


# -- SPARQL result parsing ----------------------------------------------------


def _binding_value(binding: dict | None) -> str | None:
    if binding is None:
        return None
    return binding.get("value")


def _entity_id(uri: str) -> str:
    return uri.rsplit("/", 1)[-1]


def _classify(binding: dict) -> TypedValue:
    value = binding.get("value", "")
    if binding.get("type") == "uri":
        if re.search(r"/entity/Q\d+$", value):
            return TypedValue(ValueKind.ENTITY, value)
        if "commons.wikimedia.org" in value:
            return TypedValue(ValueKind.MEDIA, value)
        return TypedValue(ValueKind.TEXT, value)
    datatype = binding.get("datatype", "")
    if datatype == _XSD_DATETIME:
        return TypedValue(ValueKind.TIME, value)
    if datatype in _XSD_NUMERIC:
        return TypedValue(ValueKind.QUANTITY, value)
    if datatype == _WKT_LITERAL:
        return TypedValue(ValueKind.COORDINATE, value)
    return TypedValue(ValueKind.TEXT, value)


def parse_sparql_results(qid: str, item_label: str, payload: dict) -> tuple[list[StatementRecord], int]:
    """Group raw SPARQL JSON rows into StatementRecords.

    Rows repeating a statement for each qualifier fold into one record.
    Unparseable rows are skipped and counted, never fatal.
    """
    rows = payload.get("results", {}).get("bindings", [])
    records: dict[tuple[str, str], StatementRecord] = {}
    skipped = 0
    for row in rows:
        try:
            property_uri = row["property"]["value"]
            pid = _entity_id(property_uri)
            if not PID_PATTERN.match(pid):
                raise ValueError(f"not a property: {property_uri}")
            value_binding = row["statementValue"]
            value = _classify(value_binding)
            rank_text = row["statementRankLabel"]["value"]
            rank = Rank(rank_text)  # raises for "Unknown"

            key = (pid, value_binding.get("value", ""))
            record = records.get(key)
            if record is None:
                value_label = _binding_value(row.get("statementValueLabel")) or ""
                record = StatementRecord(
                    qid=qid,
                    item_label=item_label,
                    pid=pid,
                    property_label=_binding_value(row.get("propertyLabel")) or pid,
                    value=value,
                    value_label=value_label,
                    qualifiers=(),
                    unit_label=_binding_value(row.get("unitOfMeasureLabel")),
                    rank=rank,
                    value_image=_binding_value(row.get("statementValueImage")),
                )
                records[key] = record

            qualifier_binding = row.get("qualifierValue")
            if qualifier_binding is not None:
                q_pid = _entity_id(row["qualifierProperty"]["value"])
                qualifier = Qualifier(
                    pid=q_pid,
                    label=_binding_value(row.get("qualifierPropertyLabel")) or q_pid,
                    value=_classify(qualifier_binding),
                    value_label=_binding_value(row.get("qualifierValueLabel")) or "",
                )
                if qualifier not in record.qualifiers:
                    records[key] = StatementRecord(
                        qid=record.qid,
                        item_label=record.item_label,
                        pid=record.pid,
                        property_label=record.property_label,
                        value=record.value,
                        value_label=record.value_label,
                        qualifiers=record.qualifiers + (qualifier,),
                        unit_label=record.unit_label,
                        rank=record.rank,
                        value_image=record.value_image,
                    )
        except (KeyError, ValueError, TypeError) as exc:
            skipped += 1
            logger.warning("skipping unparseable SPARQL row: %r", exc)
    return list(records.values()), skipped


_LABEL_QUERY = Template(
    "SELECT ?itemLabel WHERE {\n"
    "  VALUES ?item {wd:${qid}}\n"
    '  SERVICE wikibase:label { bd:serviceParam wikibase:language "${language}, en" . '
    "?item rdfs:label ?itemLabel . }\n"
    "}"
)


class SparqlClient:
    """HTTP client for a Wikidata-compatible SPARQL endpoint.

    Fetches are rate-limited (politeness) and return parsed statement
    records; rows the parser cannot understand are counted on
    ``skipped_rows`` and logged.
    """

    def __init__(
        self,
        endpoint_url: str,
        language: str = "en",
        requests_per_second: float = 2.0,
        timeout: float = 60.0,
        session: requests.Session | None = None,
        sleep=time.sleep,
        clock=time.monotonic,
    ):
        self._url = endpoint_url
        self._language = language
        self._min_interval = 1.0 / requests_per_second if requests_per_second > 0 else 0.0
        self._timeout = timeout
        self._session = session or requests.Session()
        self._sleep = sleep
        self._clock = clock
        self._last_request = float("-inf")
        self.skipped_rows = 0

    def _execute(self, query: str) -> dict:
        wait = self._last_request + self._min_interval - self._clock()
        if wait > 0:
            self._sleep(wait)
        self._last_request = self._clock()
        try:
            resp = self._session.post(
                self._url,
                data={"query": query},
                headers={"Accept": "application/sparql-results+json"},
                timeout=self._timeout,
            )
            resp.raise_for_status()
            return resp.json()
        except (requests.RequestException, ValueError) as exc:
            raise TransportError(f"SPARQL request failed: {exc}") from exc

    def item_label(self, qid: str, language: str | None = None) -> str:
        """Label of the item itself (the statement query does not carry it)."""
        query = _LABEL_QUERY.substitute(qid=qid, language=language or self._language)
        if not QID_PATTERN.match(qid):
            raise ValueError(f"not a QID: {qid!r}")
        payload = self._execute(query)
        bindings = payload.get("results", {}).get("bindings", [])
        if bindings:
            label = _binding_value(bindings[0].get("itemLabel"))
            if label:
                return label
        return qid

    def fetch_statements(self, qid: str, language: str | None = None) -> list[StatementRecord]:
        language = language or self._language
        label = self.item_label(qid, language)
        payload = self._execute(render_sparql(qid, language))
        records, skipped = parse_sparql_results(qid, label, payload)
        self.skipped_rows += skipped
        return records
