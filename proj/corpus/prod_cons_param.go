package main

import "fmt"

func producer(out chan int, signal chan int) {
	for i := 0; i < 2; i++ {
		out <- i
	}
	signal <- 1
}

func consumer(in chan int) {
	for {
		item := <-in
		fmt.Println(item)
	}
}

func main() {
	k, n, m := 5, 10, 10
	queue := make(chan int, k)
	finished := make(chan int)
	for p := 0; p < n; p++ {
		go producer(queue, finished)
	}
	for c := 0; c < m; c++ {
		go consumer(queue)
	}
	for w := 0; w < n; w++ {
		<-finished
	}
	close(queue)
}
