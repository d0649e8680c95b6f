/*
 * Copyright 2026 The oslim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef OSLIM_OSLIM_HPP
#define OSLIM_OSLIM_HPP

#include "oslim/error.hpp"
#include "oslim/inductive_limit.hpp"
#include "oslim/json_io.hpp"
#include "oslim/linalg.hpp"
#include "oslim/linear_map.hpp"
#include "oslim/nuclearity.hpp"
#include "oslim/operator_system.hpp"
#include "oslim/random.hpp"
#include "oslim/tensor.hpp"
#include "oslim/uhf.hpp"

#endif  // OSLIM_OSLIM_HPP
