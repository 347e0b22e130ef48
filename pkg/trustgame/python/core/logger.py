from __future__ import annotations

import inspect
import os
import sys
from typing import Any, Optional, TextIO

LEVELS = {"debug": 10, "info": 20, "warning": 30, "error": 40, "silent": 100}


class Logger:
    """Tagged stderr logger.

    stdout is reserved for command output, so every diagnostic goes to stderr.
    The tag is taken from the calling class name, or the calling module name in
    CamelCase.
    """

    def __init__(self, level: str = "info", stream: Optional[TextIO] = None) -> None:
        self._threshold = LEVELS["info"]
        self._stream = stream
        self.set_level(os.environ.get("TRUSTGAME_LOG_LEVEL", level))

    def set_level(self, level: str) -> None:
        key = str(level or "info").strip().lower()
        self._threshold = LEVELS.get(key, LEVELS["info"])

    def enabled(self, level: str) -> bool:
        return LEVELS.get(level, LEVELS["info"]) >= self._threshold

    @property
    def stream(self) -> TextIO:
        return self._stream if self._stream is not None else sys.stderr

    @staticmethod
    def _snake_to_camel(name: str) -> str:
        parts = [p for p in name.replace("-", "_").split("_") if p]
        if not parts:
            return name or "Log"
        return "".join(p[:1].upper() + p[1:] for p in parts)

    def _resolve_tag(self, *, stacklevel: int) -> str:
        frame = inspect.currentframe()
        for _ in range(stacklevel):
            if frame is None:
                break
            frame = frame.f_back

        own_module = os.path.splitext(os.path.basename(__file__))[0]
        while frame is not None:
            owner = frame.f_locals.get("self")
            if owner is not None and not isinstance(owner, Logger):
                return owner.__class__.__name__

            candidate = frame.f_locals.get("cls")
            if isinstance(candidate, type):
                return candidate.__name__

            module_name = frame.f_globals.get("__name__")
            if module_name and module_name not in ("__main__", "builtins"):
                base = module_name.rsplit(".", 1)[-1]
                if base != own_module:
                    return self._snake_to_camel(base)

            file_path = frame.f_globals.get("__file__") or frame.f_code.co_filename
            if file_path:
                base = os.path.splitext(os.path.basename(file_path))[0]
                if base and base != own_module:
                    return self._snake_to_camel(base)

            frame = frame.f_back

        return "Log"

    def _emit(self, message: str, *, level: str, tag: Optional[str], stacklevel: int = 3) -> None:
        if not self.enabled(level):
            return
        resolved_tag = tag or self._resolve_tag(stacklevel=stacklevel)
        if level == "info":
            line = f"[{resolved_tag}] {message}"
        else:
            line = f"[{resolved_tag}] {level.upper()}: {message}"
        print(line, file=self.stream)

    def info(self, message: str, *, tag: Optional[str] = None) -> None:
        self._emit(message, level="info", tag=tag)

    def debug(self, message: str, *, tag: Optional[str] = None) -> None:
        self._emit(message, level="debug", tag=tag)

    def warning(self, message: str, *, tag: Optional[str] = None) -> None:
        self._emit(message, level="warning", tag=tag)

    def error(self, message: str, *, tag: Optional[str] = None) -> None:
        self._emit(message, level="error", tag=tag)

    def kv(self, key: str, value: Any, *, key_width: int = 14, tag: Optional[str] = None) -> None:
        self._emit(f"{str(key):{int(key_width)}s} {value}", level="info", tag=tag)

    def separator(self, *, width: int = 40, char: str = "-") -> None:
        if self.enabled("info"):
            print((char or "-")[0] * int(width), file=self.stream)

    def header(self, title: str, *, width: int = 40, char: str = "=") -> None:
        if not self.enabled("info"):
            return
        line = (char or "=")[0] * int(width)
        print(line, file=self.stream)
        print(title, file=self.stream)
        print(line, file=self.stream)


logger = Logger()
