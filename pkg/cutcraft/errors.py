class CutcraftError(Exception):
    """Base class for every failure the CLI maps to an exit code."""

    exit_code = 1


class InputError(CutcraftError):
    exit_code = 2


class DisconnectedGraphError(InputError):
    def __init__(self, components: int):
        super().__init__(f"input graph is disconnected: {components} components")
        self.components = components


class BudgetExceeded(CutcraftError):
    exit_code = 3


class BenchDisagreement(CutcraftError):
    exit_code = 4

    def __init__(self, message: str, bundle: str):
        super().__init__(f"{message} (repro bundle: {bundle})")
        self.bundle = bundle
