import asyncio

import pandas as pd

from results_log import append_run_history, read_run_history, sort_rows, write_csv


def test_run_history_round_trip(history_file):
    async def record():
        await append_run_history("table", {"T": 100}, ["out/table.csv"], "ok")
        await append_run_history("sweep", {"axis": "v"}, [], "failed: boom")
        return await read_run_history()

    entries = asyncio.run(record())

    assert [e["command"] for e in entries] == ["table", "sweep"]
    assert entries[0]["outputs"] == ["out/table.csv"]
    assert entries[1]["status"] == "failed: boom"
    assert all("timestamp" in e for e in entries)


def test_missing_and_malformed_history(history_file):
    assert asyncio.run(read_run_history()) == []

    history_file.write_text('{"command": "plot"}\nnot json\n\n')

    assert asyncio.run(read_run_history()) == [{"command": "plot"}]


def test_csv_keeps_column_order_and_exact_floats(tmp_path):
    values = [0.1 + 0.2, 1 / 3, 2.0**-40, 123456.789e10]
    frame = pd.DataFrame({"b": values, "a": range(4)})

    path = write_csv(frame, tmp_path / "nested" / "out.csv", columns=["a", "b", "c"])

    back = pd.read_csv(path, float_precision="round_trip")
    assert list(back.columns) == ["a", "b", "c"]
    assert back["b"].tolist() == values
    assert back["c"].isna().all()


def test_rows_sort_canonically():
    rows = [{"alpha": 1.0, "scheme": "loo"}, {"alpha": 0.0, "scheme": "loo"}, {"alpha": 0.0, "scheme": "hv"}]

    assert sort_rows(rows, ["alpha", "scheme"]) == [
        {"alpha": 0.0, "scheme": "hv"},
        {"alpha": 0.0, "scheme": "loo"},
        {"alpha": 1.0, "scheme": "loo"},
    ]
