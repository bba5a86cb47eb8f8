"""Peak resident memory measurement.

The primary source polls /proc/self/statm (resident pages times the page
size, so readings are multiples of the page granularity); the fallback is
resource.getrusage peak RSS. A reading of "no source available" is reported
as unavailable, never as zero. Child-process isolation polls the child's
/proc/<pid>/statm instead.
"""

import os
import subprocess
import threading
import time

try:
    import resource
except ImportError:  # pragma: no cover - non-POSIX
    resource = None

try:
    PAGE_SIZE = os.sysconf("SC_PAGE_SIZE")
except (ValueError, OSError, AttributeError):  # pragma: no cover
    PAGE_SIZE = 4096

_STATM = "/proc/self/statm"

SOURCE_STATM = "statm"
SOURCE_GETRUSAGE = "getrusage"
SOURCE_STATM_CHILD = "statm-child"
SOURCE_UNAVAILABLE = "unavailable"


def _read_statm_pages(path=_STATM):
    with open(path, "rb") as fh:
        return int(fh.read().split()[1])


def statm_available():
    try:
        _read_statm_pages()
        return True
    except (OSError, IndexError, ValueError):
        return False


class PeakMemorySampler:
    """Samples resident pages on a background thread around a solve.

    Use as a context manager; afterwards peak_bytes holds the largest
    observed resident set (page-granular for the statm source) and source
    names where the number came from.
    """

    def __init__(self, interval=0.001):
        self.interval = interval
        self.peak_bytes = None
        self.source = SOURCE_UNAVAILABLE
        self._stop = threading.Event()
        self._thread = None
        self._peak_pages = 0

    def _run(self):
        while not self._stop.is_set():
            try:
                pages = _read_statm_pages()
            except (OSError, IndexError, ValueError):  # pragma: no cover
                break
            if pages > self._peak_pages:
                self._peak_pages = pages
            self._stop.wait(self.interval)

    def __enter__(self):
        if statm_available():
            self._peak_pages = _read_statm_pages()
            self._thread = threading.Thread(target=self._run, daemon=True)
            self._thread.start()
        return self

    def __exit__(self, *exc):
        if self._thread is not None:
            self._stop.set()
            self._thread.join()
            try:
                pages = _read_statm_pages()
                if pages > self._peak_pages:
                    self._peak_pages = pages
            except (OSError, IndexError, ValueError):  # pragma: no cover
                pass
            self.peak_bytes = self._peak_pages * PAGE_SIZE
            self.source = SOURCE_STATM
        elif resource is not None:
            # ru_maxrss is the lifetime peak in KiB on Linux
            self.peak_bytes = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024
            self.source = SOURCE_GETRUSAGE
        return False


def measure_peak_memory(func, *args, **kwargs):
    """Run func under the sampler; returns (result, peak_bytes, source)."""
    with PeakMemorySampler() as sampler:
        result = func(*args, **kwargs)
    return result, sampler.peak_bytes, sampler.source


def run_child_measured(argv, interval=0.001):
    """Run a child process, polling its statm for peak residency.

    Returns (returncode, peak_bytes or None, source).
    """
    proc = subprocess.Popen(argv, stdout=subprocess.DEVNULL,
                            stderr=subprocess.DEVNULL)
    peak_pages = 0
    path = f"/proc/{proc.pid}/statm"
    usable = True
    while proc.poll() is None:
        try:
            with open(path, "rb") as fh:
                pages = int(fh.read().split()[1])
            if pages > peak_pages:
                peak_pages = pages
        except (OSError, IndexError, ValueError):
            usable = False
        time.sleep(interval)
    if usable and peak_pages > 0:
        return proc.returncode, peak_pages * PAGE_SIZE, SOURCE_STATM_CHILD
    return proc.returncode, None, SOURCE_UNAVAILABLE
