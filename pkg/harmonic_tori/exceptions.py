class HarmonicToriException(Exception):
    pass


class HarmonicToriConfigError(HarmonicToriException):
    pass


class DomainError(HarmonicToriException):
    pass


class AtInfinity(DomainError):
    pass


class ConvergenceError(HarmonicToriException):
    def __init__(self, msg, bracket=None):
        super().__init__(msg)
        self.bracket = bracket


class PathError(HarmonicToriException):
    pass


class NotSpectral(HarmonicToriException):
    def __init__(self, msg, residuals=None):
        super().__init__(msg)
        self.residuals = residuals or {}


class VerificationFailure(HarmonicToriException):
    def __init__(self, msg, sample=None):
        super().__init__(msg)
        self.sample = sample
