#pragma once

#include <string>

#include "poa/compart.hpp"

namespace poa {

// Full definition paragraph for one principle, used verbatim in the
// annotation and evaluation prompts and in the glossary output.
const std::string& principle_definition(Principle p);

// The preamble plus the ten numbered definition paragraphs.
const std::string& poa_definitions_block();

}  // namespace poa
