import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Iterator


@dataclass(frozen=True)
class CheckRecord:
    suite: str
    name: str
    ok: bool
    detail: str | None

    def as_dict(self) -> dict:
        return {'suite': self.suite, 'name': self.name, 'ok': self.ok, 'detail': self.detail}


class Verifier(ABC):
    suite: str = "verifier"

    @abstractmethod
    def verify(self, response: Any, data: dict | None = None) -> (bool, str):
        raise NotImplementedError("You must implement `verify` method.")

    @abstractmethod
    def cases(self, quick: bool = False) -> Iterator[tuple[str, Any, dict]]:
        raise NotImplementedError("You must implement `cases` method.")

    def run(self, quick: bool = False) -> list[CheckRecord]:
        records = []
        for name, response, data in self.cases(quick):
            ok, detail = self.verify(response, data)
            if not ok:
                logging.warning(f"[{self.suite}] {name} failed: {detail}")
            else:
                logging.debug(f"[{self.suite}] {name} passed.")
            records.append(CheckRecord(self.suite, name, ok, detail))

        return records
