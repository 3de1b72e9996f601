"""Harness substrate for policy/benchmark/robot composition.

Subpackages:
  wire       binary value codec with a tagged tensor extension
  transport  WebSocket inference sessions, health probe, chunk broker
  contracts  typed Policy/Benchmark/Robot interfaces, specs, mocks
  registry   schema-validated entry store, fuzzy lookup, query service
  gate       spec compatibility buckets and adapter compilation
  smoke      tiered execution checks over live endpoints
  sensors    pre-action filter, render audit, interface and cross-run checks
  workspace  run logs, receipts, sentinel-guarded file injection
  cli        the `harness` command line front end
"""

__version__ = "0.1.0"
