"""Command-line interface: a thin client over the HTTP service.

Every subcommand builds a request, sends it to the service (in-process by
default, or a remote --server URL), and prints the JSON response with
sorted keys, so repeated runs are byte-identical.  Exit codes: 0 success,
2 precondition failure (HTTP 400), 3 convergence failure (HTTP 409).
"""

from __future__ import annotations

import csv
import json
import sys

import click
import httpx
import numpy as np

EXIT_PRECONDITION = 2
EXIT_CONVERGENCE = 3


def _request(server, method, path, **kwargs):
    if server:
        with httpx.Client(base_url=server, timeout=600.0) as client:
            return client.request(method, path, **kwargs)
    import asyncio

    from .service import create_app

    async def go():
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://service",
                                     timeout=600.0) as client:
            return await client.request(method, path, **kwargs)

    return asyncio.run(go())


def _call(server, method, path, **kwargs):
    resp = _request(server, method, path, **kwargs)
    if resp.status_code == 400:
        click.echo(f"error: {resp.json().get('detail', resp.text)}", err=True)
        sys.exit(EXIT_PRECONDITION)
    if resp.status_code == 409:
        click.echo(f"did not converge: {resp.json().get('detail', resp.text)}",
                   err=True)
        sys.exit(EXIT_CONVERGENCE)
    if resp.status_code >= 300:
        click.echo(f"error: HTTP {resp.status_code}: {resp.text}", err=True)
        sys.exit(EXIT_PRECONDITION)
    return resp.json()


def _emit(payload, out: str | None):
    text = json.dumps(payload, sort_keys=True, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


def _parse_complex(text: str) -> dict:
    z = complex(text.replace("i", "j").replace(" ", ""))
    return {"re": z.real, "im": z.imag}


def _load_fn(fn, rep, delta, alpha):
    if (fn is None) == (rep is None):
        raise click.UsageError("provide exactly one of --fn or --rep")
    if rep is not None:
        with open(rep) as fh:
            d = json.load(fh)
        if "type" not in d:
            d = {"type": "canonical", **d}
        return d
    d = {"type": "named", "name": fn}
    if delta is not None:
        d["delta"] = delta
    if alpha is not None:
        d["alpha"] = alpha
    return d


fn_options = [
    click.option("--fn", default=None,
                 help="Named function (identity, tan, log, sqrt, const_i, "
                      "neg_inverse, h_delta)."),
    click.option("--rep", default=None, type=click.Path(exists=True),
                 help="JSON file with a canonical representation or function node."),
    click.option("--delta", type=float, default=None, help="h_delta parameter."),
    click.option("--alpha", type=float, default=None, help="neg_inverse parameter."),
]


def add_options(opts):
    def wrap(f):
        for opt in reversed(opts):
            f = opt(f)
        return f
    return wrap


@click.group()
@click.option("--server", default=None, envvar="HERGLOTZKIT_SERVER",
              help="Remote service URL; defaults to in-process service.")
@click.pass_context
def main(ctx, server):
    """Herglotz function toolkit."""
    ctx.obj = server


@main.command("eval")
@add_options(fn_options)
@click.option("--z", "zs", multiple=True, required=True,
              help="Evaluation point, e.g. 0+1i (repeatable).")
@click.option("--out", default=None, type=click.Path())
@click.option("--plot", default=None, type=click.Path(),
              help="Also write CSV (x, Re, Im) for points with a shared Im part.")
@click.pass_obj
def eval_cmd(server, fn, rep, delta, alpha, zs, out, plot):
    """Evaluate a Herglotz function at points of the upper half-plane."""
    payload = {"fn": _load_fn(fn, rep, delta, alpha),
               "z": [_parse_complex(z) for z in zs]}
    data = _call(server, "POST", "/eval", json=payload)
    if plot:
        with open(plot, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "re", "im"])
            for z, v in zip(payload["z"], data["values"]):
                writer.writerow([z["re"], v["re"], v["im"]])
    _emit(data, out)


@main.command("invert")
@add_options(fn_options)
@click.option("--x1", type=float, required=True)
@click.option("--x2", type=float, required=True)
@click.option("--out", default=None, type=click.Path())
@click.pass_obj
def invert_cmd(server, fn, rep, delta, alpha, x1, x2, out):
    """Recover mu((x1, x2)) by Stieltjes inversion."""
    payload = {"fn": _load_fn(fn, rep, delta, alpha), "x1": x1, "x2": x2}
    _emit(_call(server, "POST", "/invert", json=payload), out)


@main.command("expand")
@add_options(fn_options)
@click.option("--at", "location", type=click.Choice(["infinity", "zero"]),
              default="infinity")
@click.option("--order", type=int, default=0)
@click.option("--out", default=None, type=click.Path())
@click.pass_obj
def expand_cmd(server, fn, rep, delta, alpha, location, order, out):
    """Asymptotic expansion coefficients at infinity or zero."""
    payload = {"fn": _load_fn(fn, rep, delta, alpha), "location": location,
               "order": order}
    _emit(_call(server, "POST", "/expand", json=payload), out)


@main.command("sumrule")
@add_options(fn_options)
@click.option("--p", "exponent_p", type=int, default=None,
              help="Weight exponent for the sum rule at zero.")
@click.option("--n", "exponent_n", type=int, default=None,
              help="Weight exponent for the sum rule at infinity.")
@click.option("--symmetric", is_flag=True,
              help="Use the symmetric (even-weight) sum rule with exponent --n.")
@click.option("--out", default=None, type=click.Path())
@click.pass_obj
def sumrule_cmd(server, fn, rep, delta, alpha, exponent_p, exponent_n,
                symmetric, out):
    """Verify a sum rule: weighted integral of Im f against expansion data."""
    if (exponent_p is None) == (exponent_n is None):
        raise click.UsageError("provide exactly one of --p or --n")
    if exponent_p is not None:
        location, exponent = "zero", exponent_p
    else:
        location, exponent = ("symmetric" if symmetric else "infinity"), exponent_n
    payload = {"fn": _load_fn(fn, rep, delta, alpha), "location": location,
               "exponent": exponent}
    _emit(_call(server, "POST", "/sumrule", json=payload), out)


@main.group("bound")
def bound_group():
    """Physical bounds for passive systems."""


@bound_group.command("resistance")
@click.option("--C", "--c", "cap", type=float, required=True,
              help="Capacitance C.")
@click.option("--circuit", default=None, type=click.Path(exists=True),
              help="Circuit JSON; adds the numerically integrated resistance.")
@click.option("--window", type=float, default=200.0)
@click.option("--out", default=None, type=click.Path())
@click.pass_obj
def bound_resistance(server, cap, circuit, window, out):
    payload = {"C": cap, "window": window}
    if circuit:
        with open(circuit) as fh:
            payload["circuit"] = json.load(fh)
    _emit(_call(server, "POST", "/bound/resistance", json=payload), out)


@bound_group.command("metamaterial")
@click.option("--eps-t", type=float, required=True)
@click.option("--eps-inf", type=float, required=True)
@click.option("--B", "--b", "bandwidth", type=float, required=True,
              help="Relative bandwidth B in (0, 2).")
@click.option("--out", default=None, type=click.Path())
@click.pass_obj
def bound_metamaterial(server, eps_t, eps_inf, bandwidth, out):
    payload = {"eps_t": eps_t, "eps_inf": eps_inf, "B": bandwidth}
    _emit(_call(server, "POST", "/bound/metamaterial", json=payload), out)


@bound_group.command("amplitude")
@click.option("--b1", type=float, required=True,
              help="Leading coefficient of h at infinity.")
@click.option("--b1-0", "b1_0", type=float, required=True,
              help="Leading coefficient of the reference h0.")
@click.option("--omega-length", type=float, required=True,
              help="Length |Omega| of the band.")
@click.option("--out", default=None, type=click.Path())
@click.pass_obj
def bound_amplitude(server, b1, b1_0, omega_length, out):
    payload = {"b1": b1, "b1_0": b1_0, "omega_length": omega_length}
    _emit(_call(server, "POST", "/bound/amplitude", json=payload), out)


@bound_group.command("amplitude-verify")
@add_options(fn_options)
@click.option("--h0-b1", type=float, required=True)
@click.option("--band", nargs=2, type=float, required=True)
@click.option("--grid-density", type=int, default=200)
@click.option("--out", default=None, type=click.Path())
@click.pass_obj
def bound_amplitude_verify(server, fn, rep, delta, alpha, h0_b1, band,
                           grid_density, out):
    """Achieved sup |h + h0| on a band against the amplitude bound."""
    payload = {"fn": _load_fn(fn, rep, delta, alpha), "h0_b1": h0_b1,
               "band": list(band), "grid_density": grid_density}
    _emit(_call(server, "POST", "/bound/amplitude/verify", json=payload), out)


@main.command("approx")
@click.option("--problem", required=True, type=click.Path(exists=True),
              help="ApproxProblem JSON file.")
@click.option("--out", default=None, type=click.Path())
@click.option("--p", "p_override", type=click.Choice(["2", "inf"]), default=None)
@click.option("--kgon", type=int, default=64)
@click.option("--tol", type=float, default=1e-8)
@click.option("--bound-report", is_flag=True)
@click.pass_obj
def approx_cmd(server, problem, out, p_override, kgon, tol, bound_report):
    """Solve the passive approximation problem."""
    with open(problem) as fh:
        prob = json.load(fh)
    if p_override is not None:
        prob["p"] = "inf" if p_override == "inf" else 2
    payload = {"problem": prob, "kgon": kgon, "tol": tol,
               "bound_report": bound_report}
    _emit(_call(server, "POST", "/approx", json=payload), out)


@main.group("circuit")
def circuit_group():
    """Passive circuit models."""


@circuit_group.command("impedance")
@click.option("--circuit", required=True, type=click.Path(exists=True))
@click.option("--s", "ss", multiple=True, required=True,
              help="Evaluation point with Re s > 0, e.g. 1+2i (repeatable).")
@click.option("--out", default=None, type=click.Path())
@click.pass_obj
def circuit_impedance(server, circuit, ss, out):
    with open(circuit) as fh:
        payload = {"circuit": json.load(fh),
                   "s": [_parse_complex(s) for s in ss]}
    _emit(_call(server, "POST", "/circuit/impedance", json=payload), out)


@circuit_group.command("energy")
@click.option("--circuit", default=None, type=click.Path(exists=True))
@click.option("--impulse", default=None, type=click.Path(exists=True),
              help="ImpulseResponse JSON {b, measure}.")
@click.option("--input", "input_csv", required=True, type=click.Path(exists=True),
              help="CSV time series with header t,u (uniform spacing).")
@click.option("--t", "times", multiple=True, type=float, required=True,
              help="Upper integration time T (repeatable).")
@click.option("--out", default=None, type=click.Path())
@click.pass_obj
def circuit_energy(server, circuit, impulse, input_csv, times, out):
    """Absorbed-energy check for a sampled input current."""
    with open(input_csv, newline="") as fh:
        rows = list(csv.reader(fh))
    data = np.array([[float(a), float(b)] for a, b in rows[1:]])
    dts = np.diff(data[:, 0])
    if len(dts) < 1 or np.max(np.abs(dts - dts[0])) > 1e-9 * dts[0]:
        click.echo("error: time series must be uniformly spaced", err=True)
        sys.exit(EXIT_PRECONDITION)
    payload = {"samples": data[:, 1].tolist(), "dt": float(dts[0]),
               "times": list(times)}
    if circuit:
        with open(circuit) as fh:
            payload["circuit"] = json.load(fh)
    if impulse:
        with open(impulse) as fh:
            payload["impulse"] = json.load(fh)
    _emit(_call(server, "POST", "/circuit/energy", json=payload), out)


@main.command("serve")
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve_cmd(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app
    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
