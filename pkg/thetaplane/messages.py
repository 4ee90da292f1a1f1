# Copyright (c) 2026 Alessandro Orrù
# Licensed under MIT

# One-line diagnostics printed by the CLI on stderr
_MESSAGES = {
    "cli.syntax_error": "syntax error: {error}",
    "cli.io_error": "cannot read or write '{path}': {error}",
    "cli.config_error": "invalid configuration: {error}",
    "cli.domain_error": "error: {error}",
    "cli.missing_signature": "element commands need -m M or -n N",
    "cli.missing_input": "give either -e EXPR or -f FILE",
    "cli.missing_theta": "'{command}' needs --theta FILE",
    "cli.wrote_file": "wrote {path}",

    "projcheck.yes": "yes",
    "projcheck.no": "no",
    "projcheck.violation": "violation cell=[{row},{col}] relation={relation} index={index} monomial={monomial} coefficient={coefficient}",

    "trivialize.start": "Trivializing {N}x{N} projector, m={m}, mode={mode}, degree={degree}",
    "gen_test.done": "Generated test projector: seed={seed} n={n} N={N} r={r} D={degree}",
}


def msg(message_key: str, **kwargs) -> str:
    template = _MESSAGES.get(message_key, message_key)
    if kwargs:
        return template.format(**kwargs)

    return template
