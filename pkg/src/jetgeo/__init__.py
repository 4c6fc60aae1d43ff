"""Geodesics of jet-space Carnot groups and their 3D magnetic quotients."""

from .counterexample import (CounterexampleReport, counterexample_report,
                             family_poly)
from .errors import (DegenerateHill, JetGeoError, NoCandidate, NonConvergence,
                     NotApplicable, NotCriticalPoint, NotDirectType,
                     NotHillInterval, NotOdd, NotPeriodic, NotSymmetric,
                     SeparatrixStall, StartMismatch, ToleranceNotMet)
from .figures import figure_data
from .jets import (JetPoint, JetTrajectory, carnot_dilate, group_inverse,
                   group_mul, identity, integrate_jet, project_plane,
                   reflect_theta0)
from .magnetic import (MagneticPoint, MagneticTrajectory, abnormal_curve,
                       cut_time_bound, integrate_magnetic, lift_to_jet,
                       maxwell_partner, project_jet_trajectory, project_pi_F,
                       project_pr)
from .polynomials import (AffineMap, EndpointKind, HillInterval,
                          PencilElement, Polynomial, direct_type_factorize,
                          hill_intervals, markov_bound_check,
                          normalize_to_unitary, real_roots)
from .quadrature import (CostReport, PeriodReport, ScanResult, TravelInterval,
                         cost_over_travel, integrate_endpoint_singular,
                         period_report, separatrix_position, separatrix_time,
                         theta2_scan)
from .reduced import (GeodesicClass, ReducedState, ReducedTrajectory,
                      classify, integrate_reduced, ode_period, turning_points)
from .shooting import (ConnectConfig, ConnectOutcome, ConnectResult, connect,
                       SignTimeReport, sign_time)

__version__ = "0.1.0"
