"""Worked systems, each with a closed-form oracle and a simulation path."""

from .base import RateNetwork, ScenarioResult
from .battery import (BatteryResult, battery_dense_system, battery_network,
                      battery_product_indices, battery_steady_state, diagonal_ergotropy, ergotropy_closed_form)
from .engine import (EngineResult, engine_closed_form, engine_dense_system,
                     effective_beta, engine_network, heat_engine_steady_state,
                     rates_from_temperatures)
from .mbody import MBodyResult, mbody_current_closed_form, mbody_simulate, mbody_system
from .superabsorption import (SuperabsorptionResult, superabsorption_bound_analysis,
                              superabsorption_current_closed_form, superabsorption_delta_e,
                              superabsorption_spectrum, superabsorption_system)
from .superradiance import (SuperradianceResult, superradiance_closed_form,
                            superradiance_simulate, superradiance_system)

SCENARIOS = ('mbody', 'superradiance', 'superabsorption', 'engine', 'battery')
