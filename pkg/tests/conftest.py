"""Shared fixtures: the welding ontology, its mappings, and a 2-row table."""

from __future__ import annotations

import pytest

from ontoshape.mapping import UserInfo, parse_mappings
from ontoshape.ontology import parse_ontology
from ontoshape.tabular import Dataset, Table

ONTOLOGY_W = """\
class WeldingOperation
class WeldingSoftwareSystem
class MeasurementModule
class OperationCurveCurrent
class CurrentMeanValue
class CurrentArrayValue
objprop operatedUnder WeldingOperation WeldingSoftwareSystem
objprop hasModule WeldingSoftwareSystem MeasurementModule
objprop measures MeasurementModule OperationCurveCurrent
objprop hasMean OperationCurveCurrent CurrentMeanValue
objprop hasArray OperationCurveCurrent CurrentArrayValue
"""

ONTOLOGY_WX = ONTOLOGY_W + """\
class WeldingProgram
class WeldingProgramID
objprop executes WeldingOperation WeldingProgram
objprop hasProgramID WeldingProgram WeldingProgramID
"""

MAPPINGS_WX = """\
kind,table,attribute,class
table,welding_operation,,WeldingOperation
attribute,welding_operation,operation_id,WeldingOperationID
attribute,welding_operation,program_id,WeldingProgramID
attribute,welding_operation,current_mean,CurrentMeanValue
attribute,welding_operation,current_array,CurrentArrayValue
"""

DATA_2 = """\
operation_id,program_id,current_mean,current_array
op1,pg1,10.5,"[1,2]"
op2,pg2,11.0,"[3,4]"
"""

USERINFO_RULE = """\
{
  "main_class": "WeldingOperation",
  "entity_rules": [
    {"attribute_class": "SensorChannelCode",
     "entity_class": "SensorChannel",
     "relation": "hasCode"}
  ]
}
"""


def make_dataset2() -> Dataset:
    rows = [
        {"operation_id": "op1", "program_id": "pg1",
         "current_mean": "10.5", "current_array": "[1,2]"},
        {"operation_id": "op2", "program_id": "pg2",
         "current_mean": "11.0", "current_array": "[3,4]"},
    ]
    table = Table(
        "welding_operation",
        ["operation_id", "program_id", "current_mean", "current_array"],
        rows,
    )
    return Dataset({table.name: table}, "welding_operation")


@pytest.fixture(scope="session")
def ontology_w():
    return parse_ontology(ONTOLOGY_W)


@pytest.fixture(scope="session")
def ontology_wx():
    return parse_ontology(ONTOLOGY_WX)


@pytest.fixture(scope="session")
def mappings_wx():
    return parse_mappings(MAPPINGS_WX)


@pytest.fixture()
def dataset_2():
    return make_dataset2()


@pytest.fixture()
def userinfo_main():
    return UserInfo("WeldingOperation")
