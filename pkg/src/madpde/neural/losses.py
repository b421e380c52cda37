"""Training losses and their exact parameter gradients.

loss_mad is plain MSE against stored solution values.  loss_pinn combines a
PDE-residual term at interior points with a boundary-mismatch term,
weighted w1/w2; the residual needs the spatial Laplacian of the operator
output, which comes from the trunk's closed-form second-derivative
propagation (never numerical differentiation)."""

import numpy as np

from .operators import DualDeepOnet


def _as_inputs(model, g, f):
    if isinstance(model, DualDeepOnet):
        if f is None:
            raise ValueError("dual operator needs the source input f")
        return (g, f)
    return (g,)


def model_forward(model, g, x, f=None):
    return model.forward(*_as_inputs(model, g, f), x)


def model_forward_with_laplacian(model, g, x, f=None):
    return model.forward_with_laplacian(*_as_inputs(model, g, f), x)


def loss_mad(model, g, u_target, x, f=None):
    u_target = np.asarray(u_target, dtype=np.float64)
    if u_target.size == 0:
        raise ValueError("empty batch")
    pred = model_forward(model, g, x, f=f)
    return float(np.mean((pred - u_target) ** 2))


def _net_mad_grads(net, g_in, dpred, x, grads_out):
    b_out, b_cache = net.branch.forward_cached(np.atleast_2d(g_in))
    t_out, t_cache = net.trunk.forward_cached(net._map_coords(x))
    t_eff = t_out if net.combine is None else t_out * net.combine
    pred = b_out @ t_eff.T
    db_out = dpred @ t_eff
    dt_eff = dpred.T @ b_out
    dt_out = dt_eff if net.combine is None else dt_eff * net.combine
    g1 = net.branch.backward(b_cache, db_out)
    g2 = net.trunk.backward(t_cache, dt_out)
    grads_out.extend(g1)
    grads_out.extend(g2)
    if net.combine is not None:
        grads_out.append((dt_eff * t_out).sum(axis=0))
    return pred


def loss_mad_and_grad(model, g, u_target, x, f=None):
    """Returns (loss, grads) with grads aligned to model.params.  Two passes:
    a cheap forward for the error, then the adjoint sweep."""
    u_target = np.asarray(u_target, dtype=np.float64)
    if u_target.size == 0:
        raise ValueError("empty batch")
    pred = model_forward(model, g, x, f=f)
    r = pred - u_target
    loss = float(np.mean(r**2))
    dpred = (2.0 / r.size) * r
    grads = []
    if isinstance(model, DualDeepOnet):
        _net_mad_grads(model.net_g, g, dpred, x, grads)
        _net_mad_grads(model.net_f, f, dpred, x, grads)
    else:
        _net_mad_grads(model, g, dpred, x, grads)
    return loss, grads


def _boundary_target(g, g_bnd, x_bnd):
    if g_bnd is None:
        g_bnd = g
    g_bnd = np.atleast_2d(np.asarray(g_bnd, dtype=np.float64))
    if g_bnd.shape != (g.shape[0], np.atleast_2d(x_bnd).shape[0]):
        raise ValueError("boundary target shape disagrees with the boundary point set")
    return g_bnd


def loss_pinn(model, g, x_res, x_bnd, k, w1=0.9, w2=0.1, f=None, f_res=None, g_bnd=None):
    _check_weights(w1, w2)
    g = np.atleast_2d(np.asarray(g, dtype=np.float64))
    g_bnd = _boundary_target(g, g_bnd, x_bnd)
    u_res, lap_res = model_forward_with_laplacian(model, g, x_res, f=f)
    residual = lap_res + k * u_res
    if f_res is not None:
        residual = residual - f_res
    u_bnd = model_forward(model, g, x_bnd, f=f)
    return float(w1 * np.mean(residual**2) + w2 * np.mean((u_bnd - g_bnd) ** 2))


def _check_weights(w1, w2):
    if w1 < 0 or w2 < 0:
        raise ValueError("loss weights must be nonnegative")


def _net_pinn_forward(net, g_in, x_res, x_bnd):
    b_out, b_cache = net.branch.forward_cached(np.atleast_2d(g_in))
    t_res, lap_t, lap_cache = net.trunk.forward_lap_cached(net._map_coords(x_res))
    lap_t = lap_t * net.coord_scale**2
    t_bnd, bnd_cache = net.trunk.forward_cached(net._map_coords(x_bnd))
    c = net.combine
    t_res_eff = t_res if c is None else t_res * c
    lap_eff = lap_t if c is None else lap_t * c
    t_bnd_eff = t_bnd if c is None else t_bnd * c
    ctx = (b_out, b_cache, t_res, lap_t, t_bnd, lap_cache, bnd_cache,
           t_res_eff, lap_eff, t_bnd_eff)
    return b_out @ t_res_eff.T, b_out @ lap_eff.T, b_out @ t_bnd_eff.T, ctx


def _net_pinn_backward(net, ctx, d_ures, d_lap, d_ubnd, grads_out):
    (b_out, b_cache, t_res, lap_t, t_bnd, lap_cache, bnd_cache,
     t_res_eff, lap_eff, t_bnd_eff) = ctx
    db_out = d_ures @ t_res_eff + d_lap @ lap_eff + d_ubnd @ t_bnd_eff
    dt_res_eff = d_ures.T @ b_out
    dlap_eff = d_lap.T @ b_out
    dt_bnd_eff = d_ubnd.T @ b_out
    c = net.combine
    dt_res = dt_res_eff if c is None else dt_res_eff * c
    dlap_t = dlap_eff if c is None else dlap_eff * c
    dt_bnd = dt_bnd_eff if c is None else dt_bnd_eff * c
    g1 = net.branch.backward(b_cache, db_out)
    g2 = net.trunk.zero_grads()
    net.trunk.backward_lap(lap_cache, dt_res, dlap_t * net.coord_scale**2, g2)
    net.trunk.backward(bnd_cache, dt_bnd, g2)
    grads_out.extend(g1)
    grads_out.extend(g2)
    if c is not None:
        grads_out.append(
            (dt_res_eff * t_res).sum(axis=0)
            + (dlap_eff * lap_t).sum(axis=0)
            + (dt_bnd_eff * t_bnd).sum(axis=0)
        )


def loss_pinn_and_grad(
    model, g, x_res, x_bnd, k, w1=0.9, w2=0.1, f=None, f_res=None, g_bnd=None
):
    _check_weights(w1, w2)
    g = np.atleast_2d(np.asarray(g, dtype=np.float64))
    g_bnd = _boundary_target(g, g_bnd, x_bnd)
    dual = isinstance(model, DualDeepOnet)
    if dual:
        f = np.atleast_2d(np.asarray(f, dtype=np.float64))
        ur_g, lap_g, ub_g, ctx_g = _net_pinn_forward(model.net_g, g, x_res, x_bnd)
        ur_f, lap_f, ub_f, ctx_f = _net_pinn_forward(model.net_f, f, x_res, x_bnd)
        u_res, lap_res, u_bnd = ur_g + ur_f, lap_g + lap_f, ub_g + ub_f
    else:
        u_res, lap_res, u_bnd, ctx = _net_pinn_forward(model, g, x_res, x_bnd)
    residual = lap_res + k * u_res
    if f_res is not None:
        residual = residual - f_res
    rb = u_bnd - g_bnd
    loss = float(w1 * np.mean(residual**2) + w2 * np.mean(rb**2))
    d_residual = (2.0 * w1 / residual.size) * residual
    d_ures = k * d_residual
    d_lap = d_residual
    d_ubnd = (2.0 * w2 / rb.size) * rb
    grads = []
    if dual:
        _net_pinn_backward(model.net_g, ctx_g, d_ures, d_lap, d_ubnd, grads)
        _net_pinn_backward(model.net_f, ctx_f, d_ures, d_lap, d_ubnd, grads)
    else:
        _net_pinn_backward(model, ctx, d_ures, d_lap, d_ubnd, grads)
    return loss, grads
