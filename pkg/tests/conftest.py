from __future__ import annotations

from hypothesis import settings

settings.register_profile("default", deadline=None)
settings.load_profile("default")


def pytest_terminal_summary(terminalreporter):
    rows = {}
    for reports in terminalreporter.stats.values():
        for rep in reports:
            props = dict(getattr(rep, "user_properties", []) or [])
            if "criterion" not in props or not hasattr(rep, "when"):
                continue
            row = rows.setdefault(rep.nodeid, {"k": props["criterion"], "limit": props["limit"],
                                               "ok": True, "elapsed": 0.0})
            if rep.when == "call":
                row["elapsed"] = rep.duration
            if rep.failed:
                row["ok"] = False
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, row in sorted(rows.items(), key=lambda kv: kv[1]["k"]):
        mark = "PASS" if row["ok"] else "FAIL"
        name = nodeid.split("::")[-1]
        terminalreporter.write_line(
            f"criterion {row['k']:>2}: {mark}  {row['elapsed']:7.2f}s (limit {row['limit']}s)  {name}")
