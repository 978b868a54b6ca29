#include "scadasim/state_space.hpp"

#include "scadasim/errors.hpp"

namespace scadasim {

void StateSpaceModel::validate() const {
    const auto nn = n();
    const auto mm = m();
    const auto pp = p();
    if (A.cols() != nn) throw ContractViolation("model: A must be square");
    if (B.rows() != nn) throw ContractViolation("model: B rows != n");
    if (C.cols() != nn) throw ContractViolation("model: C cols != n");
    if (Q.rows() != nn || Q.cols() != nn) throw ContractViolation("model: Q must be n x n");
    if (R.rows() != pp || R.cols() != pp) throw ContractViolation("model: R must be p x p");
    if (W.rows() != nn || W.cols() != nn) throw ContractViolation("model: W must be n x n");
    if (U.rows() != mm || U.cols() != mm) throw ContractViolation("model: U must be m x m");
    if (!is_symmetric_psd(Q)) throw ContractViolation("model: Q must be symmetric PSD");
    if (!is_symmetric_psd(R)) throw ContractViolation("model: R must be symmetric PSD");
    if (!is_symmetric_psd(W)) throw ContractViolation("model: W must be symmetric PSD");
    if (!is_symmetric_pd(U, 0.0)) throw ContractViolation("model: U must be symmetric PD");
    if (tick_seconds <= 0.0) throw ContractViolation("model: tick_seconds must be > 0");
}

StateSpaceModel default_model() {
    StateSpaceModel m;
    m.tick_seconds = 0.1;
    m.A = matrix_from_rows(2, 2, {1.0, -m.tick_seconds, 0.0, 0.95});
    m.B = matrix_from_rows(2, 1, {0.0, 1.0});
    m.C = matrix_from_rows(1, 2, {1.0, 0.0});
    m.Q = matrix_from_rows(2, 2, {1e-6, 0.0, 0.0, 4e-4});
    m.R = matrix_from_rows(1, 1, {1e-4});
    m.W = Matrix::Identity(2, 2);
    m.U = matrix_from_rows(1, 1, {1.0});
    return m;
}

PlantState step_plant(const StateSpaceModel& model, const PlantState& state,
                      const Vector& u, GaussianSource& noise) {
    if (u.size() != model.m()) {
        throw ContractViolation("step_plant: control vector has wrong length");
    }
    if (state.x.size() != model.n()) {
        throw ContractViolation("step_plant: state vector has wrong length");
    }
    if (!state.x.allFinite()) {
        throw ContractViolation("step_plant: state is not finite");
    }
    PlantState next;
    next.x = model.A * state.x + model.B * u + noise.draw();
    next.t = state.t + 1;
    if (!next.x.allFinite()) {
        throw NumericError("step_plant: non-finite successor state");
    }
    return next;
}

Vector measure(const StateSpaceModel& model, const PlantState& state,
               GaussianSource& noise) {
    if (state.x.size() != model.n()) {
        throw ContractViolation("measure: state vector has wrong length");
    }
    return model.C * state.x + noise.draw();
}

}  // namespace scadasim
