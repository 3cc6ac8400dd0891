import logging
import sys
from typing import Optional, TextIO

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

class LogOut:
  """A write target that tees every message to a primary and an alternate stream."""

  def __init__(self,
               primary: TextIO,
               alt_out: Optional[TextIO] = None):
    self.primary = primary
    self.alt_out = alt_out

  def write(self, msg):
    self.primary.write(msg)

    # Pass on msg to alternate stream
    if self.alt_out:
      self.alt_out.write(msg)

  def flush(self):
    self.primary.flush()
    if self.alt_out:
      self.alt_out.flush()

def configure_logging(verbosity: int = 0,
                      log_file: Optional[TextIO] = None,
                      stream: Optional[TextIO] = None) -> logging.Handler:
  """Install a single handler on the ``multibody`` logger.

  ``verbosity`` 0/1/2+ maps to WARNING/INFO/DEBUG. Records go to ``stream``
  (stderr by default) and are copied to ``log_file`` when given.
  """
  level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
  root = logging.getLogger("multibody")
  for handler in list(root.handlers):
    root.removeHandler(handler)

  handler = logging.StreamHandler(LogOut(stream or sys.stderr, log_file))
  handler.setFormatter(logging.Formatter(LOG_FORMAT))
  root.addHandler(handler)
  root.setLevel(level)
  return handler
