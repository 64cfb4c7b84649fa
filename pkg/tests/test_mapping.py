"""Mapping CSV and user-info JSON parsing."""

from __future__ import annotations

import pytest

from conftest import MAPPINGS_WX, USERINFO_RULE
from ontoshape.errors import ParseError
from ontoshape.mapping import (
    ConnectionRule,
    EntityRule,
    UserInfo,
    parse_mappings,
    parse_userinfo,
    resolve_attribute_class,
    resolve_table_class,
    serialize_mappings,
    serialize_userinfo,
)


def test_parse_fixture_mappings():
    m = parse_mappings(MAPPINGS_WX)
    assert m.table_map == {"welding_operation": "WeldingOperation"}
    assert len(m.attribute_map) == 4
    assert m.attribute_map[("welding_operation", "program_id")] == "WeldingProgramID"


def test_header_only_is_empty():
    m = parse_mappings("kind,table,attribute,class\n")
    assert m.table_map == {}
    assert m.attribute_map == {}


def test_bad_header_rejected():
    with pytest.raises(ParseError, match="line 1"):
        parse_mappings("kind,table,attr,class\n")


def test_duplicate_attribute_mapping():
    text = (
        "kind,table,attribute,class\n"
        "attribute,t,a,X\n"
        "attribute,t,a,Y\n"
    )
    with pytest.raises(ParseError, match=r"line 3.*duplicate attribute mapping"):
        parse_mappings(text)


def test_duplicate_table_mapping():
    text = "kind,table,attribute,class\ntable,t,,X\ntable,t,,Y\n"
    with pytest.raises(ParseError, match="duplicate table mapping"):
        parse_mappings(text)


def test_empty_class_cell():
    with pytest.raises(ParseError, match="empty class cell"):
        parse_mappings("kind,table,attribute,class\nattribute,t,a,\n")


def test_unknown_kind():
    with pytest.raises(ParseError, match="unknown kind 'column'"):
        parse_mappings("kind,table,attribute,class\ncolumn,t,a,X\n")


def test_table_row_with_attribute_cell_rejected():
    with pytest.raises(ParseError, match="attribute cell empty"):
        parse_mappings("kind,table,attribute,class\ntable,t,oops,X\n")


def test_resolvers(mappings_wx):
    assert resolve_table_class(mappings_wx, "welding_operation") == "WeldingOperation"
    assert resolve_table_class(mappings_wx, "unknown_table") is None
    assert resolve_attribute_class(mappings_wx, "welding_operation", "program_id") == "WeldingProgramID"
    assert resolve_attribute_class(mappings_wx, "welding_operation", "operation_id") == "WeldingOperationID"
    assert resolve_attribute_class(mappings_wx, "welding_operation", "nope") is None


def test_serialize_mappings_round_trip(mappings_wx):
    text = serialize_mappings(mappings_wx)
    again = parse_mappings(text)
    assert again == mappings_wx
    assert serialize_mappings(again) == text


def test_parse_userinfo_minimal():
    u = parse_userinfo('{"main_class": "WeldingOperation"}')
    assert u == UserInfo("WeldingOperation")
    assert u.entity_rules == ()
    assert u.fallback_relation_prefix == "has"


def test_parse_userinfo_entity_rule():
    u = parse_userinfo(USERINFO_RULE)
    assert u.entity_rules == (EntityRule("SensorChannelCode", "SensorChannel", "hasCode"),)


def test_parse_userinfo_connection_rule():
    u = parse_userinfo(
        '{"main_class": "M", "connection_rules": '
        '[{"from": "A", "to": "B", "relation": "linksTo"}]}'
    )
    assert u.connection_rules == (ConnectionRule("A", "B", "linksTo"),)


def test_userinfo_missing_main_class():
    with pytest.raises(ParseError, match="main_class required"):
        parse_userinfo("{}")


def test_userinfo_malformed_rule():
    with pytest.raises(ParseError, match=r"entity_rules\[0\]"):
        parse_userinfo('{"main_class": "M", "entity_rules": [{"attribute_class": "X"}]}')


def test_userinfo_invalid_json():
    with pytest.raises(ParseError, match="invalid JSON"):
        parse_userinfo("{nope")


def test_serialize_userinfo_round_trip():
    u = UserInfo(
        "M",
        (EntityRule("AID", "A", "hasA"),),
        (ConnectionRule("A", "B", "feeds"),),
        fallback_relation_prefix="rel",
    )
    assert parse_userinfo(serialize_userinfo(u)) == u
