import json
import os

from unisynth import engine
from unisynth.theory import load_theory

DERIVATIONS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "derivations")

bundles = {}

with open(os.path.join(DERIVATIONS, "unify.json"), "r") as f:
    bundles["unify"] = json.load(f)

with open(os.path.join(DERIVATIONS, "equal.json"), "r") as f:
    bundles["equal"] = json.load(f)


def bundle_path(name):
    return os.path.join(DERIVATIONS, name)


class Environment:
    def __init__(self, name) -> None:
        self.name = name
        manifest = bundles[name]

        self.theory = load_theory(bundle_path(manifest["theory"]))
        self.spec = self.theory.spec(manifest["spec"])
        self.relation = manifest.get("relation")

        self.script = None
        if "script" in manifest:
            self.script = engine.load_script(bundle_path(manifest["script"]))

        self.golden = None
        if "golden" in manifest:
            with open(bundle_path(manifest["golden"]), "r") as f:
                self.golden = f.read().strip()

    def replay(self):
        return engine.replay(self.theory, self.spec, self.script)

    def search(self, config=None):
        return engine.search(self.theory, self.spec, config)


def getEnvironment(name="unify"):
    return Environment(name)
