"""RS(255, 239) over GF(2^8): systematic encoder and bounded-distance decoder.

Conventions: codewords are byte sequences in descending polynomial order
(byte 0 carries x^254), the generator has roots alpha^0 .. alpha^15, and a
codeword is message (239 bytes) followed by parity (16 bytes).  The decoder
corrects up to 8 byte errors and reports failure beyond that.
"""

from dataclasses import dataclass

import numpy as np

from .gf256 import ALPHA, EXP, EXP_NP, LOG, MUL_TABLE, ORDER, gf_mul

N = 255
K = 239
NROOTS = 16
T = 8
FCR = 0  # first consecutive root exponent


def _generator_poly() -> list[int]:
    gen = [1]
    for i in range(NROOTS):
        root = EXP[FCR + i]
        nxt = [0] * (len(gen) + 1)
        for j, c in enumerate(gen):
            nxt[j] ^= c
            nxt[j + 1] ^= gf_mul(c, root)
        gen = nxt
    return gen


GENERATOR = _generator_poly()
_GEN_TAIL_LOG = [LOG[c] for c in GENERATOR[1:]]  # all coefficients are nonzero

# alpha^(j * power(i)) for syndrome evaluation: byte i carries power N-1-i
_POWERS = (N - 1 - np.arange(N, dtype=np.int64))
_SYND_MAT = EXP_NP[(np.arange(NROOTS, dtype=np.int64)[:, None] * _POWERS[None, :]) % ORDER]


@dataclass(frozen=True)
class RsDecodeResult:
    ok: bool
    message: bytes | None
    corrected: int
    error_positions: tuple[int, ...] = ()


def rs_encode(message: bytes) -> bytes:
    """Parity bytes for a 239-byte message (LFSR long division by the generator)."""
    if len(message) != K:
        raise ValueError(f"message must be {K} bytes, got {len(message)}")
    exp = EXP
    log = LOG
    gtail = _GEN_TAIL_LOG
    par = [0] * NROOTS
    for byte in message:
        fb = byte ^ par[0]
        if fb:
            lfb = log[fb]
            for i in range(NROOTS - 1):
                par[i] = par[i + 1] ^ exp[lfb + gtail[i]]
            par[NROOTS - 1] = exp[lfb + gtail[NROOTS - 1]]
        else:
            par.pop(0)
            par.append(0)
    return bytes(par)


def rs_encode_batch(messages: np.ndarray) -> np.ndarray:
    """Parity for many messages at once; rows run the encoder in lockstep."""
    msgs = np.asarray(messages, dtype=np.uint8)
    if msgs.ndim != 2 or msgs.shape[1] != K:
        raise ValueError(f"expected shape (n, {K}), got {msgs.shape}")
    n = msgs.shape[0]
    gen_tail = np.array(GENERATOR[1:], dtype=np.uint8)
    par = np.zeros((n, NROOTS), dtype=np.uint8)
    for i in range(K):
        fb = msgs[:, i] ^ par[:, 0]
        par[:, :-1] = par[:, 1:]
        par[:, -1] = 0
        par ^= MUL_TABLE[fb[:, None], gen_tail[None, :]]
    return par


def syndromes(codeword: np.ndarray) -> np.ndarray:
    """16 syndromes S_j = c(alpha^j) of a 255-byte word."""
    cw = np.asarray(codeword, dtype=np.uint8)
    return np.bitwise_xor.reduce(MUL_TABLE[_SYND_MAT, cw[None, :]], axis=1)


def syndromes_batch(codewords: np.ndarray) -> np.ndarray:
    """Syndromes for many codewords: shape (n, 255) -> (n, 16)."""
    cws = np.asarray(codewords, dtype=np.uint8)
    if cws.ndim != 2 or cws.shape[1] != N:
        raise ValueError(f"expected shape (n, {N}), got {cws.shape}")
    out = np.empty((cws.shape[0], NROOTS), dtype=np.uint8)
    for j in range(NROOTS):
        out[:, j] = np.bitwise_xor.reduce(MUL_TABLE[_SYND_MAT[j][None, :], cws], axis=1)
    return out


def _berlekamp_massey(synd: list[int]) -> list[int]:
    """Error locator polynomial, ascending powers, Lambda[0] == 1."""
    exp = EXP
    log = LOG
    lam = [1] + [0] * NROOTS
    prev = [1] + [0] * NROOTS
    L = 0
    m = 1
    b = 1
    for n in range(NROOTS):
        d = synd[n]
        for i in range(1, L + 1):
            if lam[i] and synd[n - i]:
                d ^= exp[log[lam[i]] + log[synd[n - i]]]
        if d == 0:
            m += 1
            continue
        coef = exp[(log[d] - log[b]) % ORDER]
        lcoef = log[coef]
        if 2 * L <= n:
            tmp = lam.copy()
            for i in range(NROOTS + 1 - m):
                if prev[i]:
                    lam[i + m] ^= exp[lcoef + log[prev[i]]]
            L = n + 1 - L
            prev = tmp
            b = d
            m = 1
        else:
            for i in range(NROOTS + 1 - m):
                if prev[i]:
                    lam[i + m] ^= exp[lcoef + log[prev[i]]]
            m += 1
    return lam[: L + 1]


def rs_decode(received: bytes | bytearray | np.ndarray) -> RsDecodeResult:
    """Correct up to 8 byte errors in a 255-byte word.

    Returns the decoded message and the number of corrected bytes.  A word
    that is not within distance 8 of any codeword comes back with ok=False
    (beyond-capacity patterns may instead decode to a different nearby
    codeword, which is the usual bounded-distance behaviour).
    """
    cw = np.asarray(bytearray(received) if isinstance(received, (bytes, bytearray)) else received,
                    dtype=np.uint8)
    if cw.shape != (N,):
        raise ValueError(f"codeword must be {N} bytes, got shape {cw.shape}")

    synd = syndromes(cw)
    if not synd.any():
        return RsDecodeResult(ok=True, message=cw[:K].tobytes(), corrected=0)

    synd_list = [int(s) for s in synd]
    lam = _berlekamp_massey(synd_list)
    nerr = len(lam) - 1
    if nerr == 0 or nerr > T or lam[-1] == 0:
        return RsDecodeResult(ok=False, message=None, corrected=0)

    # Chien search: error at power p iff Lambda(alpha^-p) == 0
    lam_arr = np.array(lam, dtype=np.uint8)
    ks = np.arange(len(lam), dtype=np.int64)
    powmat = EXP_NP[(-np.outer(ks, np.arange(N, dtype=np.int64))) % ORDER]
    vals = np.bitwise_xor.reduce(MUL_TABLE[lam_arr[:, None], powmat], axis=0)
    root_powers = np.flatnonzero(vals == 0)
    if len(root_powers) != nerr:
        return RsDecodeResult(ok=False, message=None, corrected=0)

    # Forney: Omega = S * Lambda mod x^16, e_p = X_p * Omega(X_p^-1) / Lambda'(X_p^-1)
    omega = [0] * NROOTS
    for i in range(nerr + 1):
        if lam[i] == 0:
            continue
        li = LOG[lam[i]]
        for j in range(NROOTS - i):
            if synd_list[j]:
                omega[i + j] ^= EXP[li + LOG[synd_list[j]]]

    corrected = cw.copy()
    positions = []
    for p in root_powers:
        p = int(p)
        x_inv = EXP[(ORDER - p) % ORDER]  # alpha^-p
        num = 0
        for c in reversed(omega):
            num = (EXP[LOG[num] + LOG[x_inv]] if num else 0) ^ c
        den = 0
        for i in range(1, len(lam), 2):
            den ^= EXP[(LOG[lam[i]] + (i - 1) * (ORDER - p)) % ORDER] if lam[i] else 0
        if num == 0 or den == 0:
            return RsDecodeResult(ok=False, message=None, corrected=0)
        mag = EXP[(LOG[num] - LOG[den] + p) % ORDER]
        idx = N - 1 - p
        corrected[idx] ^= mag
        positions.append(idx)

    if syndromes(corrected).any():
        return RsDecodeResult(ok=False, message=None, corrected=0)
    return RsDecodeResult(ok=True, message=corrected[:K].tobytes(), corrected=nerr,
                          error_positions=tuple(sorted(positions)))
