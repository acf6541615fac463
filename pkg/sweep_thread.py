import logging
from os import environ

from PyQt5.QtCore import QObject, QRunnable, QThreadPool, Qt, pyqtSignal, pyqtSlot

log = logging.getLogger(__name__)

THREADS_ENV = 'QMEM_THREADS'


class SweepSignals(QObject):
    row = pyqtSignal(int, object)
    failed = pyqtSignal(int, object)


class SweepWorker(QRunnable):
    def __init__(self, index, job, item):
        super().__init__()
        self.signals = SweepSignals()
        self.index = index
        self.job = job
        self.item = item

    @pyqtSlot()
    def run(self):
        log.debug("row %d started", self.index)
        try:
            result = self.job(self.item)
        except Exception as e:
            log.debug("row %d failed: %s", self.index, e)
            self.signals.failed.emit(self.index, e)
            return
        self.signals.row.emit(self.index, result)


def thread_limit():
    """Worker cap from QMEM_THREADS, or Qt's ideal thread count."""
    value = environ.get(THREADS_ENV)
    if not value:
        return QThreadPool.globalInstance().maxThreadCount()
    try:
        limit = int(value)
    except ValueError:
        raise ValueError("{} must be an integer, got {!r}".format(THREADS_ENV, value))
    if limit < 1:
        raise ValueError("{} must be >= 1, got {}".format(THREADS_ENV, limit))
    return limit


class SweepRunner:
    """
    Evaluates a job over a list of items on a QThreadPool.

    Results come back in item order whatever the completion order. The
    first failure (by item index) is re-raised once the pool drains.
    """

    def __init__(self, threadpool=None):
        self.threadpool = threadpool or QThreadPool()
        self.threadpool.setMaxThreadCount(thread_limit())

    def map(self, job, items):
        items = list(items)
        results, failures = {}, {}
        workers = []
        for index, item in enumerate(items):
            worker = SweepWorker(index, job, item)
            worker.signals.row.connect(results.__setitem__, Qt.DirectConnection)
            worker.signals.failed.connect(failures.__setitem__, Qt.DirectConnection)
            workers.append(worker)

        log.debug("running %d rows on %d threads", len(workers), self.threadpool.maxThreadCount())
        for worker in workers:
            self.threadpool.start(worker)
        self.threadpool.waitForDone()

        if failures:
            raise failures[min(failures)]
        return [results[index] for index in range(len(items))]
