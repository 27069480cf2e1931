"""Draft generation: deterministic realizer and an LLM-backed mode.

The realizer concatenates bound slot tokens in slot order around the modal;
in permissive mode unbound mandatory slots become "<TBD>" placeholders so a
partial feature still yields a reviewable draft. The LLM mode posts a prompt
to a JSON completion endpoint with bounded retries; its drafts are flagged
non-deterministic in provenance.
"""
from __future__ import annotations

import json
import os
import random
import time
from dataclasses import dataclass, field
from concurrent.futures import ThreadPoolExecutor

import requests

from .corpus import split_sentences
from .errors import ConfigError, GenerationError, RealizationError, TransportError
from .recommender.features import FeatureToken
from .recommender.variants import TemplateVariant
from .tags import ARG0, ARG1, REL
from .templates import SlotKind

PLACEHOLDER = "<TBD>"


@dataclass(frozen=True)
class GenerationRequest:
    id: str
    tokens: tuple[FeatureToken, ...]
    variant: TemplateVariant
    mode: str = "realizer"


@dataclass(frozen=True)
class Draft:
    id: str
    text: str
    mode: str
    variant_rendered: str
    attempts: int = 1

    @property
    def deterministic(self) -> bool:
        return self.mode == "realizer"

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise GenerationError(f"draft {self.id} is empty")
        if len(split_sentences(self.text)) != 1:
            raise GenerationError(f"draft {self.id} is not a single sentence: {self.text!r}")


def realize(variant: TemplateVariant, permissive: bool = False) -> str:
    """Concatenate the variant's bound tokens into one sentence.

    Strict mode requires a bound subject-bearing slot (ARG0 or ARG1) and a
    bound predicate; the error lists every unbound fixed slot. Empty optional
    elements are simply skipped.
    """
    fixed_entries = [e for e in variant.slots if e.kind is SlotKind.FIXED]
    if not permissive:
        subject_bound = any(e.token is not None and e.tag in (ARG0, ARG1) for e in fixed_entries)
        predicate_bound = any(e.token is not None and e.tag == REL for e in fixed_entries)
        if not (subject_bound and predicate_bound):
            unbound = [e.tag.display for e in fixed_entries if e.token is None]
            raise RealizationError("unbound mandatory slots: " + ", ".join(unbound))
    words: list[str] = []
    for entry in variant.slots:
        if entry.kind is SlotKind.MODAL:
            words.append("shall")
        elif entry.kind is SlotKind.OPT_PREFIX:
            if entry.token is not None:
                words.append(entry.token.text)
        elif entry.kind is SlotKind.FIXED:
            if entry.token is not None:
                words.append(entry.token.text)
            elif permissive:
                words.append(PLACEHOLDER)
        elif entry.token is not None:  # variable part
            words.append(entry.token.text)
    text = " ".join(w for w in words if w).strip()
    if not text.endswith((".", "!", "?")):
        text += "."
    return text


def build_prompt(request: GenerationRequest) -> str:
    """Deterministic prompt: role-numbered tokens, the variant, one instruction."""
    token_line = ", ".join(f"{t.text}, {int(t.role)}" for t in request.tokens)
    return (
        "Feature tokens as text-role pairs "
        "(0=condition, 1=subject, 2=action, 3=object, 4=constraint):\n"
        f"{token_line}\n"
        "\n"
        "Recommended template variant:\n"
        f"{request.variant.rendered}\n"
        "\n"
        "Write exactly one functional requirement sentence. Use every token above "
        "in its stated role and keep the template variant's slot order. "
        "Respond with only the sentence."
    )


@dataclass
class LlmConfig:
    endpoint: str = ""
    model: str = ""
    temperature: float = 0.0
    max_tokens: int = 128
    timeout: float = 30.0
    retries: int = 3
    backoff: float = 0.5
    jitter: float = 0.25
    credential_env: str = "REQDRAFT_API_KEY"


def _default_transport(url: str, payload: dict, headers: dict, timeout: float) -> tuple[int, str]:
    response = requests.post(url, json=payload, headers=headers, timeout=timeout)
    return response.status_code, response.text


def _extract_text(body: str) -> str:
    try:
        payload = json.loads(body)
    except json.JSONDecodeError as exc:
        raise GenerationError(f"endpoint returned non-JSON body: {body[:200]!r}") from exc
    if isinstance(payload, dict):
        if isinstance(payload.get("text"), str):
            return payload["text"]
        choices = payload.get("choices")
        if isinstance(choices, list) and choices and isinstance(choices[0], dict):
            choice = choices[0]
            if isinstance(choice.get("text"), str):
                return choice["text"]
            message = choice.get("message")
            if isinstance(message, dict) and isinstance(message.get("content"), str):
                return message["content"]
    raise GenerationError("unrecognized endpoint response shape")


class LlmClient:
    """Minimal JSON completion client with bounded retries.

    ``transport`` is injectable for tests: a callable
    (url, payload, headers, timeout) -> (status_code, body).
    """

    def __init__(self, config: LlmConfig, transport=None, sleep=time.sleep):
        if not config.endpoint:
            raise ConfigError("llm mode requires an endpoint")
        if not config.model:
            raise ConfigError("llm mode requires a model name")
        credential = os.environ.get(config.credential_env, "")
        if not credential:
            raise ConfigError(
                f"llm mode requires a credential in ${config.credential_env}")
        self.config = config
        self._headers = {"Authorization": f"Bearer {credential}"}
        self._transport = transport or _default_transport
        self._sleep = sleep

    def complete(self, prompt: str) -> tuple[str, int]:
        """Returns (raw text, attempts used); raises after exhausting retries."""
        config = self.config
        payload = {
            "model": config.model,
            "prompt": prompt,
            "temperature": config.temperature,
            "max_tokens": config.max_tokens,
        }
        last_failure: str = "no attempts made"
        for attempt in range(1, config.retries + 1):
            try:
                status, body = self._transport(
                    config.endpoint, payload, self._headers, config.timeout)
            except Exception as exc:
                last_failure = f"transport failure: {exc}"
            else:
                if status == 200:
                    return _extract_text(body), attempt
                if status == 429 or status >= 500:
                    last_failure = f"endpoint returned {status}"
                else:
                    raise TransportError(f"endpoint rejected the request with {status}")
            if attempt < config.retries:
                delay = config.backoff * (2 ** (attempt - 1))
                self._sleep(delay * (1.0 + config.jitter * random.random()))
        raise TransportError(
            f"gave up after {config.retries} attempts; last failure: {last_failure}")


def generate(request: GenerationRequest, permissive: bool = False,
             client: LlmClient | None = None) -> Draft:
    if request.mode == "realizer":
        text = realize(request.variant, permissive=permissive)
        return Draft(id=request.id, text=text, mode="realizer",
                     variant_rendered=request.variant.rendered, attempts=1)
    if request.mode != "llm":
        raise ConfigError(f"unknown generation mode {request.mode!r}")
    if client is None:
        raise ConfigError("llm mode requires a configured client")
    raw, attempts = client.complete(build_prompt(request))
    sentences = split_sentences(raw.strip())
    if not sentences:
        raise GenerationError(f"endpoint returned an empty draft for {request.id}")
    return Draft(id=request.id, text=sentences[0], mode="llm",
                 variant_rendered=request.variant.rendered, attempts=attempts)


def generate_batch(requests_: list[GenerationRequest], permissive: bool = False,
                   client: LlmClient | None = None, max_in_flight: int = 4) -> list[Draft]:
    """Generate drafts for a batch; output order equals input order."""
    if not requests_:
        return []
    with ThreadPoolExecutor(max_workers=max(1, max_in_flight)) as pool:
        return list(pool.map(
            lambda req: generate(req, permissive=permissive, client=client), requests_))
