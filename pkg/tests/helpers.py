from app.services.symalg import Monomial, SpectralParam


def z(node, a=1, phase=0, q=0, e=1):
    """Z_{node, a^a e^{2 pi i phase} q^q} ** e"""
    return Monomial.var(node, SpectralParam(a, phase, q), e)


def zs(*factors):
    """Product of z(...) factors given as tuples"""
    result = Monomial.one()
    for f in factors:
        result = result * z(*f)
    return result
