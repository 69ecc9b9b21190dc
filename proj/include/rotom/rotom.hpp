// Copyright 2026 The Rotom Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ROTOM_ROTOM_HPP_
#define ROTOM_ROTOM_HPP_

// Umbrella header: force transmissibility analysis for serial chains.

#include "rotom/centroidal.hpp"
#include "rotom/chain_model.hpp"
#include "rotom/errors.hpp"
#include "rotom/io.hpp"
#include "rotom/reference.hpp"
#include "rotom/search.hpp"
#include "rotom/transmissibility.hpp"

#endif  // ROTOM_ROTOM_HPP_
