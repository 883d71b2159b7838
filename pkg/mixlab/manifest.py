"""Run manifests: versioned JSON scenario descriptions, validated fail-fast"""

from __future__ import print_function, division
import copy
import json
import mixlab.constants as constants
from mixlab.blocks import block_from_descriptor
from mixlab.composer import SigmaSequence
from mixlab.diagnostics import MixParams
from mixlab.grid_field import GridSpec, init_pattern
from mixlab.helpers import ManifestError, manifest_hash

TOP_KEYS = {
    "schema", "m", "ell0", "stages", "blocks", "sigma", "pattern", "budget",
    "diagnostics", "params", "padding", "output", "seed",
    }
PATTERN_KEYS = {"name", "level", "path", "seed"}
BUDGET_KEYS = {
    "explicit": {"kind", "times"},
    "enstrophy": {"kind", "B", "s", "p"},
    "palenstrophy": {"kind", "B", "s", "p"},
    }
DIAGNOSTICS = {"G": True, "H1": True, "LS": True, "sobolev": False, "costs": False, "lusin": False}
PARAM_KEYS = {"kappa", "gamma_bar", "alpha"}


def _unknown(section, given, allowed):
    extra = set(given) - set(allowed)
    if extra:
        raise ManifestError("Unknown keys in %s: %s" % (section, sorted(extra)))


def _int(value, name, minimum=0):
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ManifestError("%s must be an integer >= %d" % (name, minimum))
    return value


class RunManifest(object):
    """Validated scenario. ``data`` holds the normalized manifest (defaults filled in);
    its canonical JSON hash tags every output file."""

    def __init__(self, data):
        if not isinstance(data, dict):
            raise ManifestError("Manifest must be a JSON object")
        _unknown("manifest", data, TOP_KEYS)
        if data.get("schema") != constants.MANIFEST_SCHEMA:
            raise ManifestError("Unsupported manifest schema %r" % data.get("schema"))
        d = copy.deepcopy(data)
        for key in ("m", "stages"):
            if key not in d:
                raise ManifestError("Manifest needs %s" % key)
        _int(d["m"], "m", 1)
        _int(d["stages"], "stages", 0)
        d["ell0"] = _int(d.get("ell0", 1), "ell0", 1)
        d["seed"] = _int(d.get("seed", 0), "seed", 0)
        d["padding"] = _int(d.get("padding", constants.H1_PADDING), "padding", 2)
        d["output"] = str(d.get("output", "mixlab_out"))

        blocks = d.get("blocks", {"kind": "interleave"})
        if isinstance(blocks, dict):
            blocks = [blocks] * d["stages"]
        if not isinstance(blocks, list) or len(blocks) != d["stages"]:
            raise ManifestError("blocks must be one descriptor or a list with one per stage")
        d["blocks"] = blocks

        pattern = d.get("pattern", {"name": "left_right_halves"})
        if isinstance(pattern, str):
            pattern = {"name": pattern}
        if not isinstance(pattern, dict):
            raise ManifestError("pattern must be a name or an object")
        _unknown("pattern", pattern, PATTERN_KEYS)
        if pattern.get("name") not in constants.patterns:
            raise ManifestError("Unknown pattern %r" % pattern.get("name"))
        if pattern["name"] == "random":
            pattern.setdefault("seed", d["seed"])
        d["pattern"] = pattern

        budget = d.get("budget")
        if budget is not None:
            if not isinstance(budget, dict) or budget.get("kind") not in BUDGET_KEYS:
                raise ManifestError("budget kind must be explicit, enstrophy or palenstrophy")
            _unknown("budget", budget, BUDGET_KEYS[budget["kind"]])
            if budget["kind"] == "explicit":
                times = budget.get("times")
                if not isinstance(times, list) or len(times) < d["stages"] + 1:
                    raise ManifestError("explicit budget needs stages + 1 times")
            else:
                if not budget.get("B", 0) > 0:
                    raise ManifestError("budget B must be positive")
                budget.setdefault("p", 2)
                if budget["kind"] == "enstrophy":
                    budget.setdefault("s", 1)
                    if budget["s"] != 1:
                        raise ManifestError("enstrophy budgets have s = 1")
                else:
                    budget.setdefault("s", 2)
                    if not budget["s"] > 1:
                        raise ManifestError("palenstrophy budgets need s > 1")
        d["budget"] = budget

        diagnostics = d.get("diagnostics", {})
        if not isinstance(diagnostics, dict):
            raise ManifestError("diagnostics must be an object of toggles")
        _unknown("diagnostics", diagnostics, DIAGNOSTICS)
        toggles = dict(DIAGNOSTICS)
        toggles.update(diagnostics)
        d["diagnostics"] = toggles

        params = d.get("params", {})
        _unknown("params", params, PARAM_KEYS)
        d["params"] = params
        self.data = d

        # Build once so that bad descriptors fail here, not halfway through a run
        self.blocks()
        self.params()
        self.sigma()

    @classmethod
    def load(cls, path):
        try:
            with open(path) as f:
                data = json.load(f)
        except (IOError, OSError, ValueError) as e:
            raise ManifestError("Could not read manifest %s: %s" % (path, e))
        return cls(data)

    @property
    def hash(self):
        return manifest_hash(self.data)

    def __getitem__(self, key):
        return self.data[key]

    def blocks(self):
        cache = {}
        blocks = []
        for descriptor in self.data["blocks"]:
            key = json.dumps(descriptor, sort_keys=True)
            if key not in cache:
                cache[key] = block_from_descriptor(descriptor)
            blocks.append(cache[key])
        return blocks

    def sigma(self):
        descriptor = self.data.get("sigma")
        if descriptor is None:
            return SigmaSequence()
        if isinstance(descriptor, list):
            return SigmaSequence(descriptor)
        if isinstance(descriptor, dict) and descriptor.get("kind") == "constant" and set(descriptor) == {"kind", "c"}:
            return SigmaSequence.constant(_int(descriptor["c"], "sigma c"))
        if isinstance(descriptor, dict) and descriptor.get("kind") == "linear" and set(descriptor) == {"kind", "a"}:
            return SigmaSequence.linear(_int(descriptor["a"], "sigma a"))
        raise ManifestError("sigma must be null, a list, {kind: constant, c} or {kind: linear, a}")

    def params(self):
        try:
            return MixParams(**self.data["params"])
        except ValueError as e:
            raise ManifestError(str(e))

    def field(self):
        pattern = self.data["pattern"]
        try:
            return init_pattern(GridSpec(self.data["m"]), pattern["name"], pattern.get("level"),
                                pattern.get("path"), pattern.get("seed"))
        except (IOError, OSError) as e:
            raise ManifestError("Could not read initial field: %s" % e)

    def measure(self):
        toggles = self.data["diagnostics"]
        return tuple(name for name in ("G", "H1", "LS") if toggles[name])
