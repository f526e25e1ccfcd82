from typing import Optional

import logging
import threading

import arrow
import tinydb
from tinydb import Query
from tinydb.middlewares import Middleware


class LockedStorage(Middleware):
    """
    tinydb storage guarded by one lock; suite runs may be recorded from worker threads
    """

    def __init__(self, storage_cls):
        Middleware.__init__(self, storage_cls)
        self.__lock = threading.Lock()


    def read(self):
        with self.__lock:
            return self.storage.read()


    def write(self, data):
        with self.__lock:
            self.storage.write(data)


    def close(self):
        with self.__lock:
            self.storage.close()



class ReportStore():
    """
    Data fmt:
        "suite_runs" : {
            [doc_id: int] : {
                "suite"   : str,
                "seed"    : int,
                "pass"    : bool,
                "stamp"   : str (UTC, ISO 8601),
                "version" : str,
                "report"  : dict (SuiteReport.as_dict),
            }
        }
    The timestamp lives beside the report so the report itself stays reproducible.
    """

    __TABLE_SUITE_RUNS = 'suite_runs'

    def __init__(self, db_path: str):
        self.__logger = logging.getLogger(__class__.__name__)
        self.__db     = tinydb.TinyDB(db_path, storage=LockedStorage(tinydb.JSONStorage))


    def close(self):
        self.__db.close()


    def add_run(self, report: dict, version: str) -> int:
        table  = self.__db.table(self.__TABLE_SUITE_RUNS)
        doc_id = table.insert({
            'suite'   : report['suite'],
            'seed'    : report['seed'],
            'pass'    : report['pass'],
            'stamp'   : arrow.utcnow().isoformat(),
            'version' : version,
            'report'  : report,
        })

        self.__logger.debug(f'Stored run {doc_id} of suite {report["suite"]}')
        return doc_id


    def runs(self, suite: Optional[str] = None) -> list[dict]:
        table = self.__db.table(self.__TABLE_SUITE_RUNS)
        if isinstance(suite, type(None)):
            docs = table.all()
        else:
            docs = table.search(Query().suite == suite)

        return [ { 'id' : doc.doc_id, **doc } for doc in docs ]


    @staticmethod
    def humanize(stamp: str) -> str:
        return arrow.get(stamp).humanize()
