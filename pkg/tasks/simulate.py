import logging

from superapp.apps.qaoa_limits.exceptions import InvalidParameterError
from superapp.apps.qaoa_limits.infinite_limit import DegreeDistribution
from superapp.apps.qaoa_limits.instances import read_graph, sample_chung_lu, sample_er, sample_sk
from superapp.apps.qaoa_limits.simulator import cut_statistics, expected_energy

logger = logging.getLogger(__name__)

ENSEMBLE_ER = 'er'
ENSEMBLE_CHUNG_LU = 'chung-lu'
ENSEMBLE_SK = 'sk'
ENSEMBLES = (ENSEMBLE_ER, ENSEMBLE_CHUNG_LU, ENSEMBLE_SK)


def sample_instance(ensemble, n, seed, d=None, dist=None):
    """
    Draw one instance and return it with its Hamiltonian.

    Args:
        ensemble: one of ENSEMBLES
        n: size
        seed: integer seed
        d: average degree (er)
        dist: DegreeDistribution (chung-lu)

    Returns:
        (instance, IsingHamiltonian)
    """
    if ensemble == ENSEMBLE_ER:
        if d is None:
            raise InvalidParameterError('Ensemble er needs --d')
        instance = sample_er(n, d, seed)
    elif ensemble == ENSEMBLE_CHUNG_LU:
        if dist is None:
            raise InvalidParameterError('Ensemble chung-lu needs --dist')
        instance = sample_chung_lu(n, dist, seed)
    elif ensemble == ENSEMBLE_SK:
        instance = sample_sk(n, seed)
    else:
        raise InvalidParameterError(f'Unknown ensemble "{ensemble}". Available ensembles: {", ".join(ENSEMBLES)}')
    return instance, instance.to_hamiltonian()


def simulate(angles, graph_path=None, ensemble=None, n=None, d=None, dist=None, seed=0, shots=1000,
             max_qubits=26):
    """Simulate QAOA on a graph file or on a freshly sampled instance."""
    if graph_path is not None:
        instance = read_graph(graph_path)
        hamiltonian = instance.to_hamiltonian()
    elif ensemble is not None and n is not None:
        if isinstance(dist, str):
            dist = DegreeDistribution.parse(dist)
        instance, hamiltonian = sample_instance(ensemble, n, seed, d=d, dist=dist)
    else:
        raise InvalidParameterError('Pass either --graph or --ensemble with --n')

    energy = expected_energy(hamiltonian, angles, max_qubits=max_qubits)
    result = {
        'n': hamiltonian.n,
        'terms': len(hamiltonian.terms),
        'angles': angles.as_dict(),
        'energy': energy,
        'energy_per_vertex': energy / hamiltonian.n,
    }
    if hamiltonian.is_unit_two_body:
        result['cut'] = cut_statistics(hamiltonian, angles, shots=shots, seed=seed, max_qubits=max_qubits).as_dict()
    logger.info(f'Simulated n={hamiltonian.n} at p={angles.p}: energy {energy:.6f}')
    return result
