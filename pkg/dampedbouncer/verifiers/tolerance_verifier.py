import logging
from abc import ABC
from typing import Any

import numpy as np

from dampedbouncer.common.errors import ConfigError
from dampedbouncer.foundation.verifier.verifier import Verifier


class ToleranceVerifier(Verifier, ABC):
    """Numeric checks driven by `data`.

    kind `close` (default): |response - expected| <= atol + rtol |expected| entrywise
    kind `range`: lo <= response <= hi
    kind `bound`: |response| <= bound
    kind `flag`: response is truthy
    """

    def verify(self, response: Any, data: dict | None = None) -> (bool, str):
        data = data or {}
        kind = data.get('kind', 'close')
        logging.debug(f"Called {self.__class__.__name__} with kind={kind}")

        if kind == 'flag':
            return (True, None) if response else (False, data.get('message', f"expected a true value, got {response!r}"))

        value = np.asarray(response, dtype=float)
        if kind == 'range':
            lo, hi = data['lo'], data['hi']
            if np.all((value >= lo) & (value <= hi)):
                return True, None
            return False, f"value {value.tolist()} outside [{lo}, {hi}]"

        if kind == 'bound':
            worst = float(np.max(np.abs(value)))
            if worst <= data['bound']:
                return True, None
            return False, f"max |value| = {worst:.6e} above {data['bound']:.1e}"

        if kind == 'close':
            expected = np.asarray(data['expected'], dtype=float)
            rtol, atol = data.get('rtol', 0.0), data.get('atol', 0.0)
            excess = np.abs(value - expected) - (atol + rtol * np.abs(expected))
            if np.all(excess <= 0):
                return True, None
            i = np.unravel_index(int(np.argmax(excess)), excess.shape) if excess.shape else ()
            return False, f"got {float(value[i])!r}, expected {float(expected[i])!r} (rtol={rtol}, atol={atol}) at {i}"

        raise ConfigError(f"Check kind `{kind}` not supported!")
