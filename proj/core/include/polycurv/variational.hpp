#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "polycurv/mesh.hpp"

namespace polycurv {

class VariationalError : public std::runtime_error {
public:
    explicit VariationalError(const std::string& what) : std::runtime_error(what) {}
};

/// Per-vertex gradient of a scalar functional of the vertex positions.
struct GradientField {
    std::vector<Vec3> gradient;
};

/// Gradient of total area via the cotangent formula; defined at every
/// vertex (boundary edges contribute their single cotangent). Equals
/// -vertex_mean_curvature at interior vertices.
GradientField area_gradient(const TriMesh& mesh);

/// Same gradient assembled from per-triangle 90-degree in-plane rotations of
/// the opposite edges. Used to cross-check the cotangent route.
GradientField area_gradient_rotation(const TriMesh& mesh);

/// Gradient of enclosed volume (the per-vertex vector area); closed meshes.
GradientField volume_gradient(const TriMesh& mesh);

/// Dirichlet energy of the piecewise-linear map f on the domain mesh,
/// normalized so that the energy of the identity map equals the surface
/// area: E(f) = 1/2 sum_T |grad f_T|^2 Area(T) with the Frobenius norm.
double dirichlet_energy(const TriMesh& domain, std::span<const Vec3> f);

/// Discrete tension residual of the map f with weights from the domain
/// mesh: R_p(f) = 1/2 sum (cot a_i + cot b_i) (f(p_i) - f(p)), so
/// R_p(id) = H_p exactly and zeros of R characterize discrete harmonic maps.
/// Entries for boundary vertices are zero.
std::vector<Vec3> harmonic_residual(const TriMesh& domain, std::span<const Vec3> f);

/// Per-vertex residual magnitudes with max / RMS aggregates over interior
/// vertices.
struct ResidualReport {
    std::vector<double> value;  // indexed by vertex, boundary entries zero
    double max = 0.0;
    double rms = 0.0;
};

ResidualReport minimality_residuals(const TriMesh& mesh);                 // |H_p|
ResidualReport cmc_residuals(const TriMesh& mesh, double h);              // |H_p - h A_p|
ResidualReport harmonic_residuals(const TriMesh& domain, std::span<const Vec3> f);

enum class FlowConstraint { None, Volume };

struct FlowOptions {
    std::vector<VertexId> fixed;   // explicitly pinned vertices
    bool fix_boundary = false;     // pin every boundary vertex
    FlowConstraint constraint = FlowConstraint::None;
    int max_steps = 500;
    double step_size = 0.1;
    double tolerance = 1e-8;       // convergence: max residual over free vertices
    double volume_tolerance = 1e-10;  // relative, for the constraint projection
};

enum class FlowStatus { Converged, MaxSteps, DegenerateStep, NonFinite };

struct FlowTraceRow {
    int iteration = 0;
    double area = 0.0;
    double volume = 0.0;
    double max_h = 0.0;  // max |H_p| over free vertices
    double step_size = 0.0;
};

struct FlowState {
    TriMesh mesh;
    FlowStatus status = FlowStatus::MaxSteps;
    int iterations = 0;
    double max_residual = 0.0;     // final max |H_p| (or CMC residual)
    double cmc_h = 0.0;            // least-squares H with <H_p, A_p> pairing
    std::vector<FlowTraceRow> trace;
    std::string message;
};

/// Projected gradient descent on area: p <- p - step * grad Area on free
/// vertices, halving the step (up to 20 times) whenever a step would
/// increase area or degenerate a triangle. With the volume constraint the
/// update is followed by Newton projections along the volume gradient until
/// the enclosed volume matches the initial one to volume_tolerance. Without
/// a constraint the fixed set must be nonempty (otherwise the minimizer
/// drifts under translation).
FlowState minimize_area(const TriMesh& mesh, const FlowOptions& options);

}  // namespace polycurv
