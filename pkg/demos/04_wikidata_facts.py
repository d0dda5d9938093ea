"""Turning Wikidata statements into indexable fact lines.

Statements arrive as SPARQL JSON rows, fold into records (qualifier rows
merge into their statement), and render as "Item: Property: value" lines
keyed by a hash of the (QID, PID) pair. Deprecated-rank statements never
reach the index.
"""

from q2q import render_sparql, triple_key
from q2q.wikidata import (
    Qualifier,
    Rank,
    StatementRecord,
    TypedValue,
    ValueKind,
    format_time_value,
    group_statements,
    parse_sparql_results,
    textualize,
)

print("== the statement-listing query (head) ==")
print(render_sparql("Q668", "en")[:200], "…")

print("\n== date rendering ==")
for stamp, precision in [
    ("1947-08-15T00:00:00Z", 11),
    ("2001-05-01T00:00:00Z", 10),
    ("1999-01-01T00:00:00Z", 9),
]:
    print(f"  precision {precision}: {format_time_value(stamp, precision)}")

print("\n== textualization ==")
records = [
    StatementRecord(
        qid="Q668", item_label="India", pid="P571", property_label="Inception",
        value=TypedValue(ValueKind.TIME, "1947-08-15T00:00:00Z", precision=11),
        value_label="",
    ),
    StatementRecord(
        qid="Q668", item_label="India", pid="P6", property_label="Prime Minister",
        value=TypedValue(ValueKind.ENTITY, "http://www.wikidata.org/entity/Q1058"),
        value_label="Narendra Modi",
        qualifiers=(
            Qualifier("P580", "start time",
                      TypedValue(ValueKind.TIME, "2014-01-01T00:00:00Z", precision=9), ""),
        ),
    ),
    StatementRecord(
        qid="Q243", item_label="Eiffel Tower", pid="P4896", property_label="3D Model",
        value=TypedValue(ValueKind.MEDIA, "[filename]"),
        value_label="",
    ),
]
for record in records:
    triple = textualize(record)
    media = f"   [media: {triple.media_url}]" if triple.media_url else ""
    print(f"  {triple.text}{media}")

print("\n== grouping by (QID, PID); deprecated dropped ==")
capital_now = StatementRecord(
    qid="Q668", item_label="India", pid="P36", property_label="Capital",
    value=TypedValue(ValueKind.ENTITY, "http://www.wikidata.org/entity/Q987"),
    value_label="New Delhi", rank=Rank.PREFERRED,
)
capital_old = StatementRecord(
    qid="Q668", item_label="India", pid="P36", property_label="Capital",
    value=TypedValue(ValueKind.ENTITY, "http://www.wikidata.org/entity/Q1348"),
    value_label="Kolkata", rank=Rank.DEPRECATED,
)
groups, skipped = group_statements([capital_old, capital_now])
print(f"  skipped deprecated: {skipped}")
for group in groups:
    print(f"  key {group.triple_key.hex[:16]}…  ->  {group.text}")
print("  key equals sha256('Q668|P36'):", groups[0].triple_key == triple_key("Q668", "P36"))

print("\n== the same machinery over raw SPARQL JSON rows ==")
payload = {
    "results": {
        "bindings": [
            {
                "property": {"type": "uri", "value": "http://www.wikidata.org/entity/P36"},
                "propertyLabel": {"type": "literal", "value": "Capital"},
                "statementValue": {"type": "uri", "value": "http://www.wikidata.org/entity/Q987"},
                "statementValueLabel": {"type": "literal", "value": "New Delhi"},
                "statementRankLabel": {"type": "literal", "value": "Normal"},
            }
        ]
    }
}
parsed, skipped = parse_sparql_results("Q668", "India", payload)
print(f"  parsed {len(parsed)} statement(s), skipped {skipped}")
print(f"  {textualize(parsed[0]).text}")
