class SynthesisError(Exception):
    pass


class ParseError(SynthesisError):
    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = "{} (line {}, column {})".format(message, line, column)
        super().__init__(message)
        self.line = line
        self.column = column


# Expressions
class TermError(SynthesisError):
    pass


class AtomicExpression(TermError):
    pass


class NotATuple(TermError):
    pass


# Substitutions
class SubstError(SynthesisError):
    pass


class DuplicateVariable(SubstError):
    pass


class ImproperOperand(SubstError):
    pass


class NotAPermutation(SubstError):
    pass


class NotAVariable(SubstError):
    pass


class FuelExhausted(SynthesisError):
    def __init__(self, fuel):
        super().__init__("fuel exhausted after {} recursive calls".format(fuel))
        self.fuel = fuel


class NotIdempotent(SynthesisError):
    pass


class SortError(SynthesisError):
    pass


class SortMismatch(SynthesisError):
    pass


# Tableau rules
class RuleError(SynthesisError):
    pass


class NotUnifiable(RuleError):
    pass


class BadPath(RuleError):
    pass


class PolarityMismatch(RuleError):
    pass


class NotSplittable(RuleError):
    pass


class NotOrphan(RuleError):
    pass


class NotInitial(RuleError):
    pass


class UnknownLemma(RuleError):
    pass


class UnknownRelation(RuleError):
    pass


class IllFormedSpec(RuleError):
    pass


# Programs
class ProgramError(SynthesisError):
    pass


class DecreaseViolation(ProgramError):
    def __init__(self, parent, child):
        super().__init__("recursive call does not decrease: {} -> {}".format(parent, child))
        self.parent = parent
        self.child = child


class PrimitiveError(ProgramError):
    pass


# Derivation driver
class EngineError(SynthesisError):
    pass


class ScriptError(EngineError):
    pass


class StepFailed(EngineError):
    def __init__(self, index, cause):
        super().__init__("step {} failed: {}".format(index, cause))
        self.index = index
        self.cause = cause


class NoFinalRow(EngineError):
    pass
