// Copyright (c) 2026 the holonomy project authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "holonomy/cochain.hpp"
#include "holonomy/groupoid.hpp"
#include "holonomy/loop.hpp"
#include "holonomy/rng.hpp"

namespace holonomy {

/// \file
/// Seeded generators for groupoids, cocycle data, loops, loop arrows,
/// tangents and families. Every generator consumes a caller-owned Rng, so a
/// fixed seed reproduces the same objects on any platform. Generated cocycle
/// data passes verify_cocycle by construction; generated loops and arrows
/// pass their builders' validation.

/// One-point quotient groupoid [pt/G].
Groupoid point_quotient(const FiniteGroup& g);

/// Circle with the half-rotation Z/2 action x -> x + 1/2 (free).
Groupoid circle_shift();

/// Circle with the reflection Z/2 action x -> -x (two fixed points).
Groupoid circle_inversion();

/// Two-torus with the Z/2 action x -> -x (four fixed points).
Groupoid torus2_inversion();

/// Two-torus with the Z/2 action (x, y) -> (x + 1/2, y) (free).
Groupoid torus2_shift();

/// True when every action map has identity linear part, so that constant
/// vector fields and constant-coefficient forms are invariant.
bool translation_action(const Groupoid& gpd);

/// All homomorphisms G -> Q/Z as angle vectors indexed by element, in a
/// deterministic (lexicographic) order. The trivial character is first.
std::vector<std::vector<Rational>> all_characters(const FiniteGroup& g);

/// Nonvanishing level-0 function: exact unit phases per point on finite
/// point sets, a certified exponential of a trigonometric polynomial (with
/// an occasional integer winding factor) on tori.
CochainFunction random_gauge(const Groupoid& gpd, Rng& rng);

/// Arbitrary degree-1 element (h, A), not a cocycle in general, normalized
/// so that h(., e) = 1. Feeding it to total_coboundary yields gerbe data
/// with nonvanishing curvature on torus backends.
LineData random_line_element(const Groupoid& gpd, Rng& rng);

/// Verified line-bundle cocycle: a character pullback times a gauge
/// coboundary, times an invariant constant connection on translation
/// actions.
LineData random_line_cocycle(const Groupoid& gpd, Rng& rng);

/// Verified gerbe cocycle: the total coboundary of a random degree-1
/// element, twisted by a random group-cohomology class (small groups) and,
/// when the action preserves a constant area form, by an invariant B-field.
GerbeData random_gerbe_cocycle(const Groupoid& gpd, Rng& rng);

/// Flat degree-3 cocycle over a finite-base quotient groupoid: the
/// coboundary of a random exact 2-cochain, twisted by the nontrivial
/// degree-3 class when |G| = 2.
FlatNData random_flat3(const Groupoid& gpd, Rng& rng);

/// Random segmented loop with 1..max_segments segments: constant segments
/// over finite point sets, smooth winding segments over tori. Quotient
/// groupoids only.
SegmentedLoop random_loop(const Groupoid& gpd, Rng& rng,
                          std::size_t max_segments = 3);

/// Random loop arrow out of src: per-segment elements are drawn uniformly
/// and the target loop is the transported source.
LoopArrow random_loop_arrow(const Groupoid& gpd, const SegmentedLoop& src,
                            Rng& rng);

/// Random tangent field along the loop, compatible at breakpoints.
LoopTangent random_tangent(const Groupoid& gpd, const SegmentedLoop& loop,
                           Rng& rng);

/// Random one-parameter family of loop arrows over a torus quotient:
/// an interior perturbation vanishing at breakpoints plus, on translation
/// actions, a rigid translation that moves the breakpoints too.
LoopFamily random_family(const Groupoid& gpd, Rng& rng,
                         std::size_t max_segments = 2);

}  // namespace holonomy
