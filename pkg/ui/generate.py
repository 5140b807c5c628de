from logic import generator, persistence


def run_gen_command(args) -> int:
    instance = generator.generate_instance(args.seed, args.profile, n=args.n, points=args.points, max_block=args.maxblock)
    persistence.save_instance(instance, args.out)
    return 0
