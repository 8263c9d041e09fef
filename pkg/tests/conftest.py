import pytest

from repaircount.model import Database, FDSet, Schema, atom, fact, fd, query

EMP_SCHEMA = Schema.of(E=["id", "name", "dept"])
EMP_SIGMA = FDSet(EMP_SCHEMA, [fd("E", "id", "name dept")])
EMP_FACTS = [
    fact("E", 1, "Bob", "HR"), fact("E", 1, "Bob", "IT"),
    fact("E", 2, "Alice", "IT"), fact("E", 2, "Tim", "IT"),
]
# two employees working in the same department
SAME_DEPT = query(atom("E", 1, "n1", "d"), atom("E", 2, "n2", "d"))


@pytest.fixture
def emp():
    return Database(EMP_SCHEMA, EMP_FACTS), EMP_SIGMA


@pytest.fixture
def same_dept():
    return SAME_DEPT


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod and mod.REPORT:
        terminalreporter.section("acceptance criteria")
        for line in mod.REPORT:
            terminalreporter.write_line(line)
