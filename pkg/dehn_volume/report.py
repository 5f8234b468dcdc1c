"""
Plain-text reports rendered through Jinja2.

Numbers go through the ``num`` and ``cplx`` filters so every report honours
the requested precision.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Any, Sequence

from jinja2 import BaseLoader, Environment

if TYPE_CHECKING:
    from dehn_volume.pipeline import CheckResult, VolumeResult
    from dehn_volume.store.store import VolumeRun


VOLUME_TEMPLATE = """\
Manifold:   {{ result.manifold }}
Filling:    {{ result.filling }}
Candidates: {{ result.candidates | length }}
{% for (m, l), k, uv in cusps %}
Cusp {{ loop.index0 }}:     M = {{ m | cplx }}  L = {{ l | cplx }}  k = {{ k if k is not none else '-' }}  (u, v) = ({{ uv[0] }}, {{ uv[1] }})
{% endfor %}
Psi:        {{ result.report.psi | cplx }}
Volume:     {{ result.report.volume | num }}
CS:         {{ result.report.cs | num }} (mod {{ modulus }})
Checks:     {{ 'all passed' if result.passed else 'FAILED: ' ~ (result.failed_checks | map(attribute='name') | join(', ')) }}
"""

CHECK_TEMPLATE = """\
{{ '%-18s' | format('check') }} {{ '%14s' | format('residual') }} {{ '%10s' | format('tolerance') }}  status
{% for check in checks %}
{{ '%-18s' | format(check.name) }} {{ '%14.3e' | format(check.value) }} {{ '%10.0e' | format(check.tolerance) }}  {{ 'ok' if check.passed else 'FAIL' }}
{% endfor %}
"""

TABLE_TEMPLATE = """\
{{ '%-8s' | format('filling') }} {{ '%-32s' | format('M') }} {{ '%-32s' | format('L') }} {{ '%-9s' | format('(u, v)') }} Psi
{% for row in rows %}
{{ '%-8s' | format(row.filling) }} {{ '%-32s' | format(row.meridian | cplx) }} {{ '%-32s' | format(row.longitude | cplx) }} {{ '%-9s' | format(row.uv) }} {{ row.psi | cplx }}{{ '' if row.passed else '  (checks failed)' }}
{% endfor %}
"""

HISTORY_TEMPLATE = """\
{% if not runs %}
No stored runs.
{% else %}
{{ '%5s' | format('id') }}  {{ '%-12s' | format('manifold') }} {{ '%-8s' | format('filling') }} {{ '%-7s' | format('(u, v)') }} Psi
{% for run in runs %}
{{ '%5d' | format(run.id) }}  {{ '%-12s' | format(run.manifold) }} {{ '%-8s' | format(run.filling) }} {{ '%-7s' | format('(%d,%d)' | format(run.u, run.v)) }} {{ run.psi | cplx }}{{ '' if run.checks_passed else '  (checks failed)' }}
{% endfor %}
{% endif %}
"""


def _environment(precision: int) -> Environment:
    env = Environment(
        loader=BaseLoader(),
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )
    env.filters["num"] = lambda x: f"{x:.{precision}f}"
    env.filters["cplx"] = lambda z: format_complex(complex(z), precision)
    return env


def format_complex(value: complex, precision: int = 9) -> str:
    sign = "+" if value.imag >= 0 else "-"
    return f"{value.real:.{precision}f} {sign} {abs(value.imag):.{precision}f} i"


def _render(template: str, precision: int, **variables: Any) -> str:
    return _environment(precision).from_string(template).render(**variables)


def render_volume(result: VolumeResult, precision: int = 9) -> str:
    cusps = list(
        zip(result.selected.targets, result.selected.windings, result.peripheral.uv)
    )
    modulus = "pi^2" if result.report.modulus.value == "pi_squared" else "pi^2/2"
    return _render(VOLUME_TEMPLATE, precision, result=result, cusps=cusps, modulus=modulus)


def render_checks(checks: Sequence[CheckResult], precision: int = 9) -> str:
    return _render(CHECK_TEMPLATE, precision, checks=checks)


def render_table(results: Sequence[VolumeResult], precision: int = 9) -> str:
    rows = [
        {
            "filling": str(r.filling),
            "meridian": r.selected.targets[0][0],
            "longitude": r.selected.targets[0][1],
            "uv": "({}, {})".format(*r.peripheral.uv[0]),
            "psi": r.report.psi,
            "passed": r.passed,
        }
        for r in results
    ]
    return _render(TABLE_TEMPLATE, precision, rows=rows)


def render_history(runs: Sequence[VolumeRun], precision: int = 9) -> str:
    return _render(HISTORY_TEMPLATE, precision, runs=runs)
