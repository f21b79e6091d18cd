#pragma once

#include <ostream>

#include "cdmrg/fsymbol.hpp"

namespace cdmrg {

/// Human-readable listing of a category: irreps with characters, fusion and action multiplicities,
/// and nonzero F-symbols.
void dump_category(std::ostream &os, const ModuleCategory &cat, bool with_fsymbols = true);

}
