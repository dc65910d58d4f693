"""Sign conventions shared by the form, polyvector and Thom-Whitney layers.

Everything that reorders odd symbols goes through :func:`sort_sign`, and every
Koszul-type sign goes through :func:`koszul`.  The conventions are:

* forms: ``dt_a ^ dt_b = -dt_b ^ dt_a``; a monomial stores its dt indices sorted.
* polyvectors: a wedge of ``m`` derivation generators has degree ``-m`` and
  the generators anticommute.
* tensors: ``(a (x) v) ^ (b (x) w) = (-1)^(|b||v|) (a ^ b) (x) (v ^ w)`` and
  ``[a (x) v, b (x) w] = (-1)^((|v|+1)|b|) (a ^ b) (x) [v, w]``.
* brackets: ``[d, f] = -d(f)`` and ``[d_i, d_j] = -(d_i d_j - d_j d_i)``.  On a
  p-vector and a q-vector this is ``-(-1)^((p+1)(q+1))`` times the usual
  shuffle formula for multiderivations.
"""


def sort_sign(seq):
    """Sort a sequence of odd symbols.

    Returns ``(sign, sorted_tuple)``; sign is 0 when a symbol repeats.
    """
    items = list(seq)
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, len(items)):
        if items[i] == items[i - 1]:
            return 0, ()
    return sign, tuple(items)


def merge_sign(a, b):
    """Sign and sorted union of two sorted tuples of odd symbols (0 on overlap)."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    if set(a) & set(b):
        return 0, ()
    # number of inversions between a and b
    inv = 0
    j = 0
    for x in a:
        while j < len(b) and b[j] < x:
            j += 1
        inv += j
    return (-1 if inv % 2 else 1), tuple(sorted(a + b))


def koszul(p, q):
    """(-1)^(p*q) for integer degrees."""
    return -1 if (p * q) % 2 else 1
