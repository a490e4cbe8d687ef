"""Python facade over the native module.

JSON documents cross the native boundary as strings; this wrapper decodes
them so callers work with plain dicts.
"""

import json

try:
    from . import _slotshift as _native
except ImportError:  # in-build tree: module sits on sys.path directly
    import _slotshift as _native

uunifast = _native.uunifast


def generate_taskset(**kwargs):
    return json.loads(_native.generate_taskset(**kwargs))


def build_table(taskset, seed=0):
    return json.loads(_native.build_table(json.dumps(taskset), seed))


def analyze(table):
    return json.loads(_native.analyze(json.dumps(table)))


def simulate(table, seed=0, n_slots=0, overrun_prob=0.0, nominal=False):
    out = _native.simulate(json.dumps(table), seed, n_slots, overrun_prob, nominal)
    out["metrics"] = json.loads(out["metrics"])
    return out


def admit_probe(table, wcet, deadline, at_slot=0):
    return _native.admit_probe(json.dumps(table), wcet, deadline, at_slot)


def run_experiment(config=None, **kwargs):
    cfg = dict(config or {})
    cfg.update(kwargs)
    return json.loads(_native.run_experiment(json.dumps(cfg)))
