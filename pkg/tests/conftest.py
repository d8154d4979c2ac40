from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from clawfactor.search import add_witness_listener  # noqa: E402

# every witness emitted during the session, audited by the witness criterion
SESSION_WITNESSES: list = []
add_witness_listener(SESSION_WITNESSES.append)


def pytest_collection_modifyitems(session, config, items):
    # the witness audit must see the witnesses of every other test
    last = [it for it in items if it.name == "test_criterion_7"]
    items[:] = [it for it in items if it.name != "test_criterion_7"] + last
