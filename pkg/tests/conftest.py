from __future__ import annotations

import pytest


def pytest_collection_modifyitems(config, items):
    # transcription checks guard every other test, so they run first
    items.sort(key=lambda item: 0 if item.module.__name__.endswith("test_transcription") else 1)


@pytest.fixture
def cli_run(capsys):
    import json

    from lattangle.cli import main

    def run(*argv):
        code = main(list(argv))
        out = capsys.readouterr().out
        report = json.loads(out) if out.strip().startswith("{") else None
        return code, report

    return run
