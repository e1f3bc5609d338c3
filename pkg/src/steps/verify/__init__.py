from .verificationstep import VerificationStep

__all__ = ['VerificationStep']
