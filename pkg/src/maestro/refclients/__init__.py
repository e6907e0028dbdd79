"""Runnable protocol clients: reference submissions in external-process form.

These are the same algorithms as the in-process reference methods, driven
over the newline-JSON wire protocol. They serve as protocol documentation,
as fixtures for the adapter-equivalence checks, and as starting points for
real external submissions.
"""
