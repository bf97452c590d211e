#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ela/common.hpp"
#include "ela/sampling.hpp"

namespace ela::problems {

/// Function ids of the implemented BBOB-style functions.
inline const std::vector<int>& implemented_fids() {
    static const std::vector<int> fids{1, 3, 4, 5, 8, 10, 14, 17, 20, 24};
    return fids;
}

std::string function_name(int fid);

/// A seeded instance of a test function.
///
/// Instances of the same function differ by a shift of the optimum, an
/// orthonormal rotation (for the functions that are rotated in BBOB:
/// 10, 14, 17, 24) and an additive offset of the objective value.
/// Instance id 0 is the untransformed base function.
class ProblemInstance {
public:
    ProblemInstance(ProblemId id, Eigen::VectorXd x_opt, Eigen::MatrixXd rotation, double y_opt);

    const ProblemId& id() const noexcept { return id_; }
    const Eigen::VectorXd& x_opt() const noexcept { return x_opt_; }
    const Eigen::MatrixXd& rotation() const noexcept { return rotation_; }
    double y_opt() const noexcept { return y_opt_; }
    sampling::BoxDomain domain() const { return sampling::BoxDomain::cube(id_.dim); }

    double operator()(const Eigen::VectorXd& x) const;

    /// Callable wrapper suitable for sampling::evaluate_design.
    sampling::Objective objective() const;

private:
    ProblemId id_;
    Eigen::VectorXd x_opt_;
    Eigen::MatrixXd rotation_;
    double y_opt_;
};

/// Builds instance (fid, dim, iid). Shift, rotation and offset derive
/// deterministically from (seed_base, fid, dim, iid).
/// Throws UnsupportedFunction for an unknown fid and InvalidArgument for
/// dim < 2 or iid < 0.
ProblemInstance make_instance(int fid, int dim, int iid, std::uint64_t seed_base = 0);

/// Cartesian product ordered by (dim, fid, iid).
std::vector<ProblemInstance> suite(const std::vector<int>& dims, const std::vector<int>& fids,
                                   const std::vector<int>& iids, std::uint64_t seed_base = 0);

/// `fid,dim,iid,y_opt`
std::string manifest_csv(const std::vector<ProblemInstance>& instances);

/// Coarse landscape class used by the synthetic run generator: true for the
/// multimodal functions (3, 4, 17, 20, 24).
bool is_multimodal(int fid);

}  // namespace ela::problems
