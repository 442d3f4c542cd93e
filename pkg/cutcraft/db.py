import logging
from typing import Optional, Sequence

from sqlalchemy.engine import Engine
from sqlmodel import Session, SQLModel, create_engine, select

from .config import settings
from .models import BenchRecord

logger = logging.getLogger("cutcraft.db")


def make_engine(url: Optional[str] = None) -> Engine:
    url = url or settings.DATABASE_URL
    connect_args = {"check_same_thread": False} if url.startswith("sqlite") else {}
    return create_engine(url, echo=False, connect_args=connect_args)


engine = make_engine()


def get_session(bind: Optional[Engine] = None) -> Session:
    return Session(bind or engine)


def init_db(bind: Optional[Engine] = None):
    SQLModel.metadata.create_all(bind or engine)


def store_records(records: Sequence[BenchRecord], bind: Optional[Engine] = None) -> int:
    init_db(bind)
    with get_session(bind) as db:
        db.add_all(records)
        db.commit()
    logger.info("Stored %d bench record(s)", len(records))
    return len(records)


def load_records(run_id: str, bind: Optional[Engine] = None) -> list[BenchRecord]:
    with get_session(bind) as db:
        rows = db.exec(select(BenchRecord).where(BenchRecord.run_id == run_id).order_by(BenchRecord.id))
        return list(rows.all())
