"""Brute-force reference implementations used only by the tests.

Nothing here calls numpy.fft or the package under test: spectra come from
explicit DFT sums, norms and means from plain loops where sizes allow.
"""
import math

import numpy as np


def hann(n):
    return np.array([0.5 - 0.5 * math.cos(2 * math.pi * k / n) for k in range(n)])


def dft_matrix(n_out, n_in, size):
    """Rows b = 0..n_out-1 of the size-point DFT, restricted to n_in inputs."""
    b = np.arange(n_out)[:, None]
    n = np.arange(n_in)[None, :]
    return np.exp(-2j * np.pi * ((b * n) % size) / size)


def direct_dft_frame(frame, size):
    """O(n^2) one-sided DFT of a single real frame, as a Python loop."""
    out = []
    for b in range(size // 2 + 1):
        acc = 0j
        for n, v in enumerate(frame):
            acc += v * complex(math.cos(2 * math.pi * b * n / size), -math.sin(2 * math.pi * b * n / size))
        out.append(acc)
    return np.array(out)


def brute_stft(x, win, hop, nfft):
    x = np.asarray(x, dtype=float)
    n_frames = 1 + (len(x) - win) // hop
    w = hann(win)
    mat = dft_matrix(nfft // 2 + 1, win, nfft)
    cols = [mat @ (x[k * hop : k * hop + win] * w) for k in range(n_frames)]
    return np.stack(cols, axis=1)


def brute_envelope(x):
    x = np.asarray(x, dtype=float)
    n = len(x)
    fwd = dft_matrix(n, n, n)
    spectrum = fwd @ x
    h = np.zeros(n)
    h[0] = 1
    for k in range(1, n):
        if 2 * k < n:
            h[k] = 2
        elif 2 * k == n:
            h[k] = 1
    inv = np.conj(fwd) / n
    return np.abs(inv @ (spectrum * h))


def frob(a):
    return math.sqrt(sum(abs(v) ** 2 for v in np.ravel(a)))


def brute_stft_distance(rl, rr, pl, pr, win=400, hop=240, nfft=448):
    return sum(
        frob(brute_stft(a, win, hop, nfft) - brute_stft(b, win, hop, nfft))
        for a, b in ((rl, pl), (rr, pr))
    )


def brute_env_distance(rl, rr, pl, pr):
    return sum(frob(brute_envelope(a) - brute_envelope(b)) for a, b in ((rl, pl), (rr, pr)))


def brute_wave_l2(rl, rr, pl, pr):
    total = 0.0
    count = 0
    for real, pred in ((rl, pl), (rr, pr)):
        for a, b in zip(real, pred):
            total += (a - b) ** 2
            count += 1
    return total / count


def brute_snr(rl, rr, pl, pr):
    sig = sum(v * v for v in list(rl) + list(rr))
    err = sum((a - b) ** 2 for a, b in zip(list(rl) + list(rr), list(pl) + list(pr)))
    err = max(err, sig * 1e-12)
    return 10 * math.log10(sig / err)


def brute_spl(seg):
    norm = math.sqrt(sum(v * v for v in seg))
    return 20 * math.log10(max(norm, 1e-10) / 2e-5)


def brute_spl_curve(left, right, flen, fhop):
    n_frames = 1 + (len(left) - flen) // fhop
    return [
        brute_spl(left[k * fhop : k * fhop + flen]) - brute_spl(right[k * fhop : k * fhop + flen])
        for k in range(n_frames)
    ]


def brute_spl_distance(a, b):
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))


def brute_mrstft(rl, rr, pl, pr, resolutions=((512, 128, 512), (1024, 256, 1024), (2048, 512, 2048))):
    total = 0.0
    for nfft, hop, win in resolutions:
        for real, pred in ((rl, pl), (rr, pr)):
            real = np.concatenate([real, np.zeros(max(0, win - len(real)))])
            pred = np.concatenate([pred, np.zeros(max(0, win - len(pred)))])
            a = np.abs(brute_stft(real, win, hop, nfft))
            b = np.abs(brute_stft(pred, win, hop, nfft))
            ref = frob(a)
            sc = frob(a - b) / ref if ref > 0 else 0.0
            log_t = np.sum(np.abs(np.log(a + 1e-7) - np.log(b + 1e-7))) / a.size
            lin_t = np.sum(np.abs(a - b)) / a.size
            total += sc + log_t + lin_t
    return total / (2 * len(resolutions))


def interval_coverage(starts, window, total):
    """Coverage count per sample by checking each sample against every interval."""
    return np.array([sum(1 for s in starts if s <= i < s + window) for i in range(total)])
