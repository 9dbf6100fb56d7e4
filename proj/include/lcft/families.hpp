// Test data: dbar potentials with analytic derivatives, interior bumps for
// the homotopy checks, and boundary concentration families.
#pragma once

#include "lcft/forms.hpp"
#include "lcft/geometry.hpp"
#include "lcft/model_domain.hpp"

namespace lcft {

// f = dbar of phi(|lambda1/R1|^2 + |lambda2/R2|^2), phi(t) = (1-t)^4, in the
// frame (u1, u2) at center; closed and exact by construction
Form01 dbar_frame_bump(const C2& center, const C2& u1, const C2& u2, double R1, double R2);

// isotropic interior bump (frame = coordinate axes)
Form01 dbar_round_bump(const C2& center, double radius);

// the coordinate form dzbar_j, with potential conj(z_j)
Form01 coordinate_form(int j);

enum class FamilyKind {
  bump,                   // dbar of a polydisc-scaled bump at depth ~ t
  tangential_oscillation, // holomorphic boundary peak times a tangential dzbar
};

FamilyKind parse_family_kind(const std::string& s);
std::string family_kind_name(FamilyKind k);

// Concentration data at scale t anchored at the domain's reference boundary
// point. The bump kind is supported in the c0-polydisc P_t at depth ~ t
// (delta in [t/2, 2t] on the support); the tangential kind is
// (t/(t+w))^s v2-dzbar with w the holomorphic support coordinate at the
// anchor, peaked on the |w| ~ t region.
Form01 concentration_family(const ModelDomain& dom, double t, FamilyKind kind, double c0 = 0.1,
                            int peak_power = 4);

}  // namespace lcft
