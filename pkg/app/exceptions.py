class ServiceError(Exception):
    exit_code = 1
    status_code = 500

    def __init__(self, message: str, exit_code: int = None, status_code: int = None):
        super().__init__(message)
        if exit_code is not None:
            self.exit_code = exit_code
        if status_code is not None:
            self.status_code = status_code

class AlgebraError(ServiceError):
    pass

class NotSymmetricError(AlgebraError):
    pass

class NonFiniteError(AlgebraError):
    pass

class ReductionError(ServiceError):
    pass

class SingularAngleError(ReductionError):
    pass

class AnglesDifferError(ReductionError):
    pass

class ZeroOmegaError(ReductionError):
    pass

class InputError(ServiceError):
    exit_code = 2
    status_code = 422

class AngleUnderdeterminedError(ServiceError):
    exit_code = 3
    status_code = 409

class OutputError(ServiceError):
    exit_code = 4
    status_code = 500
