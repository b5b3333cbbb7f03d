"""Exception hierarchy shared by every latforge module."""


class LatForgeError(Exception):
    """Base class for all latforge errors."""


class NotALattice(LatForgeError):
    def __init__(self, x, y, kind="join"):
        self.x, self.y, self.kind = x, y, kind
        bound = "least upper" if kind == "join" else "greatest lower"
        super().__init__(f"elements {x} and {y} have no unique {bound} bound")


class CyclicCovers(LatForgeError):
    pass


class UnknownName(LatForgeError):
    pass


class BadParam(LatForgeError):
    pass


class BadInterval(LatForgeError):
    pass


class CapExceeded(LatForgeError):
    def __init__(self, cap, reached=None, **stats):
        self.cap = cap
        self.reached = reached
        self.stats = stats
        super().__init__(f"closure exceeded cap {cap} (reached {reached})")


class NotMaterialized(LatForgeError):
    pass


class UnboundVariable(LatForgeError):
    pass


class ParseError(LatForgeError):
    pass


class NotSurjective(LatForgeError):
    pass


class NoMinimum(LatForgeError):
    pass


class NotJoinHom(LatForgeError):
    pass


class NotHomomorphism(LatForgeError):
    pass


class PreconditionW(LatForgeError):
    pass


class PreconditionFailed(LatForgeError):
    pass


class NoWitness(LatForgeError):
    pass


class NoRelativeComplement(LatForgeError):
    pass


class NotJoinIrreducible(LatForgeError):
    pass


class NotDistributive(LatForgeError):
    pass


class NotInMomega(LatForgeError):
    pass


class PremiseViolated(LatForgeError):
    def __init__(self, index, message=""):
        self.index = index
        super().__init__(f"premise {index} violated{': ' + message if message else ''}")


class ConclusionFailed(LatForgeError):
    pass


class BadFloor(LatForgeError):
    pass


class NotConvexSublattice(LatForgeError):
    pass


class IndexOutOfWindow(LatForgeError):
    pass


class IndexOutOfTruncation(LatForgeError):
    pass


class DimensionMismatch(LatForgeError):
    pass


class FieldMismatch(LatForgeError):
    pass


class UnknownProperty(LatForgeError):
    pass
