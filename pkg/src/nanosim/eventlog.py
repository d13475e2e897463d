"""Structured run logs: newline-delimited JSON records, one run per file.

Record vocabulary (field `ev`):
  meta      run header: protocol, seed, config digest
  topo      node id/position/role table
  gen       a source created a data packet
  tx        a transmission burst: sender, kind, bits, copies, receiver list
  lost      a listed receiver did not take a burst (dead, or died receiving)
  disc      one atomic neighbor discovery round (broadcast + replies)
  collect   the collector stored one candidate route for a request
  route     the collector answered a request with a main and backup route
  dlv       first copy of a data packet reached the collector
  drop      terminal failure of a data packet, with reason
  kill      fault injection removed a node
  rerr      a route error travelled back to the source
  switch    a source changed its active route
  node_end  per-node closing energy statement
  end       run trailer with counters

Numbers are written with repr-level precision so identical runs serialize to
identical bytes.
"""

from __future__ import annotations

import io
import json


class EventLog:
    """Append-only in-memory record list with NDJSON serialization."""

    def __init__(self):
        self.records: list[dict] = []

    def add(self, record: dict) -> None:
        self.records.append(record)

    def dumps(self) -> str:
        buf = io.StringIO()
        for rec in self.records:
            json.dump(rec, buf, separators=(",", ":"), sort_keys=True)
            buf.write("\n")
        return buf.getvalue()

    def write(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.dumps())


def read_log(path) -> list[dict]:
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(json.loads(line))
    return out


def iter_log(path):
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield json.loads(line)
