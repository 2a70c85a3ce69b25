#pragma once

// Graphviz export. Identities are omitted; morphisms named in `dashed`
// (learned by paraphrasis) are drawn dashed, the rest solid.

#include <set>
#include <string>

#include "fiblang/fincat.hpp"
#include "fiblang/speaker.hpp"

namespace fiblang {

std::string category_dot(const FinCategory& c, const std::string& graph_name,
                         const std::set<std::string>& dashed = {});

std::string language_dot(const Speaker& s);

/// The category of elements, one cluster per fibre; a morphism is dashed
/// when it lies over a learned language morphism.
std::string total_dot(const Speaker& s);

}  // namespace fiblang
