// Copyright 2026 The Cohesion Authors
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

#ifndef COHESION_COHESION_HPP
#define COHESION_COHESION_HPP

#include "cohesion/affinity.hpp"
#include "cohesion/box.hpp"
#include "cohesion/canny.hpp"
#include "cohesion/config.hpp"
#include "cohesion/discovery.hpp"
#include "cohesion/eval.hpp"
#include "cohesion/image.hpp"
#include "cohesion/image_io.hpp"
#include "cohesion/object_maps.hpp"
#include "cohesion/parallel.hpp"
#include "cohesion/proposals.hpp"
#include "cohesion/saliency.hpp"
#include "cohesion/sparse.hpp"
#include "cohesion/spectral.hpp"
#include "cohesion/superpixels.hpp"
#include "cohesion/synth.hpp"

#endif  // COHESION_COHESION_HPP
