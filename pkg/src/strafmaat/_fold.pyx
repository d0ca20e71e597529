# cython: language_level=3
"""Compiled single-pass text-normalization kernel.

Contract (shared with the pure-Python fallback strafmaat._fold_py):

    fold_collapse(text, fold) == " ".join(text.translate(fold).split())

`fold` maps code points to ASCII replacement strings without whitespace.
The single pass keeps unmodified spans as slices and fast-paths ASCII, which
is the overwhelming majority of judgment text.
"""

from cpython.unicode cimport Py_UNICODE_ISSPACE


def fold_collapse(unicode text, dict fold):
    """Fold characters per `fold` and collapse whitespace runs to one space."""
    cdef Py_ssize_t i, n = len(text)
    cdef Py_ssize_t run = 0        # start of the current verbatim run
    cdef bint sep_pending = False  # whitespace seen since the last piece
    cdef list parts = []
    cdef Py_UCS4 ch
    cdef long cp
    cdef object rep

    for i in range(n):
        ch = text[i]
        if Py_UNICODE_ISSPACE(ch):
            if run < i:
                if sep_pending and parts:
                    parts.append(" ")
                parts.append(text[run:i])
                sep_pending = False
            run = i + 1
            sep_pending = True
        elif ch >= 128:
            cp = <long> ch
            rep = fold.get(cp)
            if rep is not None:
                if run < i:
                    if sep_pending and parts:
                        parts.append(" ")
                    parts.append(text[run:i])
                    sep_pending = False
                run = i + 1
                if <str> rep:
                    if sep_pending and parts:
                        parts.append(" ")
                    parts.append(rep)
                    sep_pending = False
            # not in the table: kept verbatim as part of the run

    if run < n:
        if sep_pending and parts:
            parts.append(" ")
        parts.append(text[run:n])

    return "".join(parts)
