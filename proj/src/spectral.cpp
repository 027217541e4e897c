#include "nlap/spectral.hpp"

#include "nlap/errors.hpp"
#include "nlap/multipliers.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <numeric>
#include <thread>

namespace nlap {

namespace {

constexpr double kMeanZeroTol = 1e-12;
constexpr double kSingularGuard = 1e-300;
constexpr double kRadiusMergeTol = 1e-12;

// Row-major strides with axis 0 slowest.
std::vector<Eigen::Index> strides(const TorusSpec& torus) {
    std::vector<Eigen::Index> out(static_cast<std::size_t>(torus.n), 1);
    for (int axis = torus.n - 2; axis >= 0; --axis) {
        out[axis] = out[axis + 1] * torus.grid_sizes[axis + 1];
    }
    return out;
}

void require_size(const TorusSpec& torus, Eigen::Index count, const char* what) {
    torus.validate();
    if (count != torus.size()) {
        throw ShapeError(std::string(what) + ": array length does not match the grid");
    }
}

int thread_count() {
    if (const char* env = std::getenv("NLAP_THREADS")) {
        const int requested = std::atoi(env);
        if (requested > 0) {
            return requested;
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Applies a 1-D transform along every axis in turn.
void transform_axes(const TorusSpec& torus, Eigen::ArrayXcd& data, bool inverse) {
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    const std::vector<Eigen::Index> stride = strides(torus);
    const Eigen::Index total = torus.size();
    std::vector<std::complex<double>> line;
    std::vector<std::complex<double>> result;
    for (int axis = 0; axis < torus.n; ++axis) {
        const Eigen::Index len = torus.grid_sizes[axis];
        const Eigen::Index step = stride[axis];
        line.resize(static_cast<std::size_t>(len));
        for (Eigen::Index start = 0; start < total; ++start) {
            if ((start / step) % len != 0) {
                continue;
            }
            for (Eigen::Index j = 0; j < len; ++j) {
                line[j] = data[start + j * step];
            }
            if (inverse) {
                fft.inv(result, line);
            } else {
                fft.fwd(result, line);
            }
            for (Eigen::Index j = 0; j < len; ++j) {
                data[start + j * step] = result[j];
            }
        }
    }
}

// Flat index in DFT order (k mod N per axis) for each centered-order position.
std::vector<Eigen::Index> centered_to_dft(const TorusSpec& torus) {
    const Eigen::MatrixXi k = wave_indices(torus);
    const std::vector<Eigen::Index> stride = strides(torus);
    std::vector<Eigen::Index> map(static_cast<std::size_t>(k.cols()));
    for (Eigen::Index c = 0; c < k.cols(); ++c) {
        Eigen::Index flat = 0;
        for (int axis = 0; axis < torus.n; ++axis) {
            const int len = torus.grid_sizes[axis];
            flat += ((k(axis, c) % len + len) % len) * stride[axis];
        }
        map[c] = flat;
    }
    return map;
}

Eigen::Index zero_mode_index(const TorusSpec& torus) {
    const std::vector<Eigen::Index> stride = strides(torus);
    Eigen::Index flat = 0;
    for (int axis = 0; axis < torus.n; ++axis) {
        flat += (torus.grid_sizes[axis] / 2) * stride[axis];
    }
    return flat;
}

}  // namespace

TorusSpec TorusSpec::cube(int n, double length, int grid_size) {
    TorusSpec torus;
    torus.n = n;
    torus.lengths.assign(static_cast<std::size_t>(std::max(n, 0)), length);
    torus.grid_sizes.assign(static_cast<std::size_t>(std::max(n, 0)), grid_size);
    return torus;
}

void TorusSpec::validate() const {
    if (n < 1) {
        throw ParameterError("torus: n must be >= 1");
    }
    if (lengths.size() != static_cast<std::size_t>(n) ||
        grid_sizes.size() != static_cast<std::size_t>(n)) {
        throw ShapeError("torus: need one length and one grid size per axis");
    }
    for (int i = 0; i < n; ++i) {
        if (!(lengths[i] > 0.0) || !std::isfinite(lengths[i])) {
            throw ParameterError("torus: lengths must be finite and > 0");
        }
        if (grid_sizes[i] < 2) {
            throw ParameterError("torus: grid sizes must be >= 2");
        }
    }
}

Eigen::Index TorusSpec::size() const {
    return std::accumulate(grid_sizes.begin(), grid_sizes.end(), Eigen::Index{1},
                           [](Eigen::Index acc, int len) { return acc * len; });
}

Eigen::MatrixXi wave_indices(const TorusSpec& torus) {
    torus.validate();
    const std::vector<Eigen::Index> stride = strides(torus);
    Eigen::MatrixXi k(torus.n, torus.size());
    for (Eigen::Index c = 0; c < k.cols(); ++c) {
        for (int axis = 0; axis < torus.n; ++axis) {
            const int len = torus.grid_sizes[axis];
            k(axis, c) = static_cast<int>((c / stride[axis]) % len) - len / 2;
        }
    }
    return k;
}

Eigen::MatrixXd frequencies(const TorusSpec& torus) {
    Eigen::MatrixXd nu = wave_indices(torus).cast<double>();
    for (int axis = 0; axis < torus.n; ++axis) {
        nu.row(axis) *= 2.0 * std::numbers::pi / torus.lengths[axis];
    }
    return nu;
}

Eigen::MatrixXd grid_points(const TorusSpec& torus) {
    torus.validate();
    const std::vector<Eigen::Index> stride = strides(torus);
    Eigen::MatrixXd x(torus.n, torus.size());
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        for (int axis = 0; axis < torus.n; ++axis) {
            const int len = torus.grid_sizes[axis];
            x(axis, c) = static_cast<double>((c / stride[axis]) % len) * torus.lengths[axis] / len;
        }
    }
    return x;
}

GridField sample_grid(const TorusSpec& torus,
                      const std::function<double(const Eigen::VectorXd&)>& u) {
    const Eigen::MatrixXd x = grid_points(torus);
    GridField g{torus, Eigen::ArrayXd(x.cols())};
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        g.samples[c] = u(x.col(c));
    }
    return g;
}

Eigen::ArrayXd eigenvalue_array(const TorusSpec& torus, const KernelParams& params,
                                const EvalPolicy& policy) {
    params.validate();
    policy.validate();
    const Eigen::MatrixXd nu = frequencies(torus);
    const Eigen::ArrayXd radius2 = nu.colwise().squaredNorm().transpose().array();
    const Eigen::Index count = radius2.size();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(count));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return radius2[a] < radius2[b]; });

    // Group equal radii; group g covers order[starts[g] .. starts[g+1]).
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i == 0 || radius2[order[i]] - radius2[order[starts.back()]] >
                          kRadiusMergeTol * radius2[order[i]]) {
            starts.push_back(i);
        }
    }
    starts.push_back(order.size());
    const std::size_t groups = starts.size() - 1;

    std::vector<double> values(groups, 0.0);
    const int workers = static_cast<int>(std::min<std::size_t>(thread_count(), groups));
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));
    auto work = [&](int id) {
        try {
            for (std::size_t g = static_cast<std::size_t>(id); g < groups; g += workers) {
                const double r2 = radius2[order[starts[g]]];
                values[g] = r2 == 0.0 ? 0.0 : multiplier(params, std::sqrt(r2), policy).value;
            }
        } catch (...) {
            failures[id] = std::current_exception();
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int id = 0; id < workers; ++id) {
            pool.emplace_back(work, id);
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }
    for (const std::exception_ptr& failure : failures) {
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    Eigen::ArrayXd out(count);
    for (std::size_t g = 0; g < groups; ++g) {
        for (std::size_t i = starts[g]; i < starts[g + 1]; ++i) {
            out[order[i]] = values[g];
        }
    }
    return out;
}

SpectralField forward_transform(const GridField& g) {
    require_size(g.torus, g.samples.size(), "forward_transform");
    Eigen::ArrayXcd data = g.samples.cast<std::complex<double>>();
    transform_axes(g.torus, data, false);
    const std::vector<Eigen::Index> map = centered_to_dft(g.torus);
    const double scale = 1.0 / static_cast<double>(g.torus.size());
    SpectralField out{g.torus, Eigen::ArrayXcd(data.size())};
    for (Eigen::Index c = 0; c < data.size(); ++c) {
        out.coeffs[c] = data[map[c]] * scale;
    }
    return out;
}

GridField inverse_transform(const SpectralField& g_hat) {
    require_size(g_hat.torus, g_hat.coeffs.size(), "inverse_transform");
    const std::vector<Eigen::Index> map = centered_to_dft(g_hat.torus);
    Eigen::ArrayXcd data(g_hat.coeffs.size());
    for (Eigen::Index c = 0; c < data.size(); ++c) {
        data[map[c]] = g_hat.coeffs[c];
    }
    transform_axes(g_hat.torus, data, true);
    return {g_hat.torus, data.real()};
}

SpectralField apply_operator_spectral(const SpectralField& u, const KernelParams& params,
                                      const EvalPolicy& policy) {
    return apply_operator_spectral(u, eigenvalue_array(u.torus, params, policy));
}

SpectralField apply_operator_spectral(const SpectralField& u, const Eigen::ArrayXd& eigenvalues) {
    require_size(u.torus, u.coeffs.size(), "apply_operator_spectral");
    require_size(u.torus, eigenvalues.size(), "apply_operator_spectral");
    return {u.torus, u.coeffs * eigenvalues.cast<std::complex<double>>()};
}

SpectralField solve_poisson(const SpectralField& f, const KernelParams& params,
                            const EvalPolicy& policy) {
    return solve_poisson(f, eigenvalue_array(f.torus, params, policy));
}

SpectralField solve_poisson(const SpectralField& f, const Eigen::ArrayXd& eigenvalues) {
    require_size(f.torus, f.coeffs.size(), "solve_poisson");
    require_size(f.torus, eigenvalues.size(), "solve_poisson");
    const Eigen::Index zero = zero_mode_index(f.torus);
    const double largest = f.coeffs.abs().maxCoeff();
    if (std::abs(f.coeffs[zero]) > kMeanZeroTol * largest) {
        throw CompatibilityError("solve_poisson: right-hand side must have zero mean (|f_0| = " +
                                 std::to_string(std::abs(f.coeffs[zero])) + ")");
    }
    SpectralField u{f.torus, Eigen::ArrayXcd::Zero(f.coeffs.size())};
    for (Eigen::Index c = 0; c < f.coeffs.size(); ++c) {
        if (c == zero) {
            continue;
        }
        if (std::abs(eigenvalues[c]) < kSingularGuard) {
            throw SingularEigenvalueError("solve_poisson: eigenvalue too close to zero");
        }
        u.coeffs[c] = f.coeffs[c] / eigenvalues[c];
    }
    return u;
}

double sobolev_norm(const SpectralField& u, double s) {
    require_size(u.torus, u.coeffs.size(), "sobolev_norm");
    const Eigen::MatrixXi k = wave_indices(u.torus);
    const Eigen::ArrayXd weight =
        (1.0 + k.cast<double>().colwise().squaredNorm().transpose().array()).pow(s);
    return std::sqrt((weight * u.coeffs.abs2()).sum());
}

}  // namespace nlap
