#ifndef FUSIONKIT_MODELS_H_
#define FUSIONKIT_MODELS_H_

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fusionkit/logic.h"
#include "fusionkit/structure.h"

namespace fusionkit {

// Visits every structure of `sig` whose sorts have between min_size and
// max_size elements (named e0, e1, ...). Stops early when `visit` returns
// false.
void ForEachStructure(const Signature& sig, int max_size,
                      const std::function<bool(const FiniteStructure&)>& visit,
                      int min_size = 0);

// Equal for isomorphic structures.
std::string IsomorphismKey(const FiniteStructure& s);

FiniteStructure RandomStructure(const Signature& sig, const std::vector<int>& sizes,
                                std::mt19937& rng, double density = 0.5);

// Lists the models of `f` (up to isomorphism) of size <= max_size.
std::vector<FiniteStructure> ModelsUpTo(const Signature& sig, const Formula& f, int max_size);

}  // namespace fusionkit

#endif  // FUSIONKIT_MODELS_H_
