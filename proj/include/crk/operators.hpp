#pragma once

#include "crk/crspace.hpp"

#include <vector>

namespace crk {

// All operators map broken polynomials u on the mesh of `space` (or, with a
// FineSource, on the fine mesh of a refinement of it) to CR functions. Edge
// sums run over the edges that carry DOFs, so a homogeneous space gives the
// boundary-condition variants. Inputs pass the CR jump gate first.

/// Sum of F_{E,k-1}(u) b_{E,k-1} over the given edges (all edges when empty).
CRFunction pi_edge_nc(const SpacePtr& space, const PiecewisePoly& u,
                      const std::vector<int>& edges = {}, FineSource src = {});
/// Sum of F_{E,j}(u) b_{E,j}, j <= k-2.
CRFunction pi_edge_c(const SpacePtr& space, const PiecewisePoly& u, FineSource src = {});
CRFunction pi_edge(const SpacePtr& space, const PiecewisePoly& u, FineSource src = {});
/// Sum of F_{K,alpha}(u) b_{K,alpha}.
CRFunction pi_vol(const SpacePtr& space, const PiecewisePoly& u, FineSource src = {});
/// Conforming part with vanishing vertex values: Pi^{E,c} u + Pi^T(u - Pi^{E,c} u).
CRFunction pi_dot(const SpacePtr& space, const PiecewisePoly& u, FineSource src = {});

/// psi^z_S = 1/2 sum of b_{E,k-1} over the edges of S at z.
CRFunction psi_vertex(const SpacePtr& space, const SubmeshSelection& s, int z);
/// Sum of F_{S,z}(u) psi^z_S over the vertices of S (interior ones for
/// homogeneous spaces).
CRFunction pi_vertex(const SpacePtr& space, const SubmeshSelection& s, const PiecewisePoly& u,
                     FineSource src = {});

/// M^S u = Pi^{V(S)} u + Pi^{nc} u + Pi_dot u, the nonconforming part taken
/// over all edges outside E(S).
CRFunction partially_conforming(const SpacePtr& space, const SubmeshSelection& s,
                                const PiecewisePoly& u, FineSource src = {});
/// The same operator evaluated through its three nested stages.
CRFunction partially_conforming_nested(const SpacePtr& space, const SubmeshSelection& s,
                                       const PiecewisePoly& u);

/// gamma_E for Phi_E; mesh independent because F_{E,k-1} is scaled by |E|.
double phi_scale(int k);
/// Phi_E = gamma_E W_E P_{k-1}^{(1,1)}(2 l_{z0} - 1), degree k+1.
PiecewisePoly phi_edge(const MeshPtr& mesh, int k, int E);
/// Sum of F_{E,k-1}(u) Phi_E over the edges with DOFs.
PiecewisePoly pi_phi(const SpacePtr& space, const PiecewisePoly& u);

/// J u in S_{k+1,0}: Pi^V u + Pi^Phi(u - Pi^V u) + Pi_dot(u - Pi^Phi(u - Pi^V u)).
PiecewisePoly companion(const SpacePtr& space, const PiecewisePoly& u);

/// A coarse broken polynomial written on the fine mesh of a refinement.
PiecewisePoly restrict_to_fine(const RefinedMesh& pair, const PiecewisePoly& u);

/// I^{fine}(J u) for u in the coarse space.
CRFunction fine_right_inverse(const RefinedMesh& pair, const SpacePtr& fine_space,
                              const CRFunction& u);

/// P-hat = M^R o M^{R-hat}: fine CR_{k,0} functions into the coarse space,
/// with values in both CR spaces.
CRFunction intersect_map(const RefinedMesh& pair, const SpacePtr& coarse_space,
                         const SpacePtr& fine_space, const CRFunction& v);

}  // namespace crk
